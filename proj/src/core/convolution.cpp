// Sequential convolution of the per-summand laws a_i * xi.
//
// The work is done on integers whenever possible: entries are scaled by the
// lcm of their denominators, atom values of xi likewise, and the final values
// are divided back. Exotic inputs whose scaled sums would overflow 62 bits
// take the slower rational path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "smallball/core.hpp"
#include "smallball/errors.hpp"

namespace smallball {

namespace {

struct IPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator<(const IPoint& a, const IPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
  friend bool operator==(const IPoint& a, const IPoint& b) { return a.x == b.x && a.y == b.y; }
  friend IPoint operator+(const IPoint& a, const IPoint& b) { return {a.x + b.x, a.y + b.y}; }
};

template <class V>
using Law = std::vector<std::pair<V, BigInt>>;

template <class V>
Law<V> convolve(const std::vector<Law<V>>& factors, const V& zero, std::size_t atom_budget) {
  Law<V> cur{{zero, BigInt(1)}};
  Law<V> merged, scratch;
  for (const auto& factor : factors) {
    if (cur.size() > atom_budget / std::max<std::size_t>(factor.size(), 1))
      throw BudgetError("projected support " + std::to_string(cur.size()) + " x " +
                        std::to_string(factor.size()) + " exceeds atom budget " +
                        std::to_string(atom_budget));
    merged.clear();
    for (const auto& [shift, w] : factor) {
      // Shifting a sorted list keeps it sorted, so each copy merges in place.
      scratch.clear();
      scratch.reserve(merged.size() + cur.size());
      auto it = merged.begin();
      for (const auto& [v, cw] : cur) {
        V nv = v + shift;
        while (it != merged.end() && it->first < nv) scratch.push_back(std::move(*it++));
        BigInt nw = (w == 1) ? cw : BigInt(cw * w);
        if (it != merged.end() && it->first == nv) {
          it->second += nw;
          scratch.push_back(std::move(*it++));
        } else {
          scratch.emplace_back(nv, std::move(nw));
        }
      }
      while (it != merged.end()) scratch.push_back(std::move(*it++));
      std::swap(merged, scratch);
    }
    // Mass can cancel to zero only for zero weights, which never occur.
    std::swap(cur, merged);
  }
  return cur;
}

BigInt denominator_lcm(const std::vector<Rational>& xs) {
  BigInt d = 1;
  for (const auto& x : xs) d = lcm(d, x.get_den());
  return d;
}

std::vector<Rational> xi_values(const SignDistribution& xi) {
  std::vector<Rational> v;
  for (const auto& a : xi.atoms()) v.push_back(a.value);
  return v;
}

constexpr double kIntLimit = 4.0e18;

}  // namespace

ExactDistribution exact_sign_sum_distribution(const CoefficientMultiset& a, const SignDistribution& xi,
                                              std::size_t atom_budget) {
  const auto& entries = a.scalar_entries();
  const auto values = xi_values(xi);
  const auto& weights = xi.weights();
  BigInt den_w = 1;
  for (std::size_t i = 0; i < entries.size(); ++i) den_w *= xi.denominator();

  BigInt da = denominator_lcm(entries);
  BigInt dx = denominator_lcm(values);
  double reach = 0;
  for (const auto& e : entries) {
    double m = 0;
    for (const auto& v : values)
      m = std::max(m, std::abs(Rational(e * da).get_d() * Rational(v * dx).get_d()));
    reach += m;
  }

  std::vector<ExactDistribution::Atom> atoms;
  if (reach < kIntLimit) {
    std::vector<Law<std::int64_t>> factors;
    for (const auto& e : entries) {
      Law<std::int64_t> f;
      BigInt ei = BigInt(e.get_num() * (da / e.get_den()));
      for (std::size_t k = 0; k < values.size(); ++k) {
        BigInt vk = BigInt(values[k].get_num() * (dx / values[k].get_den()));
        f.emplace_back(BigInt(ei * vk).get_si(), weights[k]);
      }
      std::sort(f.begin(), f.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
      factors.push_back(std::move(f));
    }
    auto law = convolve<std::int64_t>(factors, 0, atom_budget);
    BigInt scale = da * dx;
    atoms.reserve(law.size());
    for (auto& [v, w] : law) {
      Rational r(BigInt(static_cast<long>(v)), scale);
      r.canonicalize();
      atoms.push_back({std::move(r), std::move(w)});
    }
  } else {
    std::vector<Law<Rational>> factors;
    for (const auto& e : entries) {
      Law<Rational> f;
      for (std::size_t k = 0; k < values.size(); ++k) f.emplace_back(Rational(e * values[k]), weights[k]);
      std::sort(f.begin(), f.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
      factors.push_back(std::move(f));
    }
    auto law = convolve<Rational>(factors, Rational(0), atom_budget);
    for (auto& [v, w] : law) atoms.push_back({std::move(v), std::move(w)});
  }
  return ExactDistribution(std::move(atoms), den_w, entries.size());
}

ExactDistribution2d exact_sign_sum_distribution_2d(const CoefficientMultiset& a, const SignDistribution& xi,
                                                   std::size_t atom_budget) {
  const auto& entries = a.point_entries();
  const auto values = xi_values(xi);
  const auto& weights = xi.weights();
  BigInt den_w = 1;
  for (std::size_t i = 0; i < entries.size(); ++i) den_w *= xi.denominator();

  std::vector<Rational> coords;
  for (const auto& p : entries) {
    coords.push_back(p.x);
    coords.push_back(p.y);
  }
  BigInt da = denominator_lcm(coords);
  BigInt dx = denominator_lcm(values);
  double reach = 0;
  for (const auto& c : coords) {
    double m = 0;
    for (const auto& v : values) m = std::max(m, std::abs(Rational(c * da).get_d() * Rational(v * dx).get_d()));
    reach += m;
  }

  std::vector<ExactDistribution2d::Atom> atoms;
  auto sort_law = [](auto& f) {
    std::sort(f.begin(), f.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  };
  if (reach < kIntLimit) {
    std::vector<Law<IPoint>> factors;
    for (const auto& p : entries) {
      Law<IPoint> f;
      BigInt px = BigInt(p.x.get_num() * (da / p.x.get_den()));
      BigInt py = BigInt(p.y.get_num() * (da / p.y.get_den()));
      for (std::size_t k = 0; k < values.size(); ++k) {
        BigInt vk = BigInt(values[k].get_num() * (dx / values[k].get_den()));
        f.emplace_back(IPoint{BigInt(px * vk).get_si(), BigInt(py * vk).get_si()}, weights[k]);
      }
      sort_law(f);
      factors.push_back(std::move(f));
    }
    auto law = convolve<IPoint>(factors, IPoint{}, atom_budget);
    BigInt scale = da * dx;
    for (auto& [v, w] : law) {
      Rational x(BigInt(static_cast<long>(v.x)), scale), y(BigInt(static_cast<long>(v.y)), scale);
      x.canonicalize();
      y.canonicalize();
      atoms.push_back({Point2(std::move(x), std::move(y)), std::move(w)});
    }
  } else {
    std::vector<Law<Point2>> factors;
    for (const auto& p : entries) {
      Law<Point2> f;
      for (std::size_t k = 0; k < values.size(); ++k) f.emplace_back(values[k] * p, weights[k]);
      sort_law(f);
      factors.push_back(std::move(f));
    }
    auto law = convolve<Point2>(factors, Point2(0, 0), atom_budget);
    for (auto& [v, w] : law) atoms.push_back({std::move(v), std::move(w)});
  }
  return ExactDistribution2d(std::move(atoms), den_w, entries.size());
}

Concentration concentration_of(const ExactDistribution& dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.atoms().size(); ++i)
    if (dist.atoms()[i].weight > dist.atoms()[best].weight) best = i;
  return {dist.probability(best), dist.atoms()[best].value};
}

Concentration concentration_probability(const CoefficientMultiset& a, const SignDistribution& xi,
                                        std::size_t atom_budget) {
  return concentration_of(exact_sign_sum_distribution(a, xi, atom_budget));
}

BigInt largest_binomial_sum(unsigned n, unsigned long m) {
  std::vector<BigInt> c;
  for (unsigned i = 0; i <= n; ++i) c.push_back(binomial(n, i));
  std::sort(c.begin(), c.end(), [](const BigInt& x, const BigInt& y) { return x > y; });
  BigInt s = 0;
  for (std::size_t i = 0; i < c.size() && i < m; ++i) s += c[i];
  return s;
}

CoefficientMultiset symmetric_progression(unsigned n) {
  if (n < 1 || n % 2 == 0) throw ValidationError("symmetric progression needs odd n >= 1");
  std::vector<long long> v;
  long long h = (n - 1) / 2;
  for (long long i = -h; i <= h; ++i) v.push_back(i);
  return CoefficientMultiset::integers(v);
}

std::vector<StanleyRow> stanley_constant_scan(const std::vector<unsigned>& n_list, std::size_t atom_budget) {
  std::vector<StanleyRow> rows;
  for (unsigned n : n_list) {
    if (n < 3 || n % 2 == 0) throw ValidationError("stanley scan needs odd n >= 3, got " + std::to_string(n));
    auto c = concentration_probability(symmetric_progression(n), SignDistribution::bernoulli(), atom_budget);
    rows.push_back({n, c.rho, c.rho.get_d() * std::pow(static_cast<double>(n), 1.5)});
  }
  return rows;
}

}  // namespace smallball
