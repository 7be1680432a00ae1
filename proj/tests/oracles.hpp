#pragma once

// Brute-force reference computations. These deliberately avoid the library's
// algorithms: they enumerate every outcome, scan every candidate, and use the
// plainest formula available, so agreement with the library is meaningful.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "smallball/arith.hpp"
#include "smallball/sign_distribution.hpp"

namespace oracle {

using smallball::BigInt;
using smallball::Point2;
using smallball::Rational;

inline std::vector<std::pair<Rational, Rational>> law_of(const smallball::SignDistribution& xi) {
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& a : xi.atoms()) out.emplace_back(a.value, a.prob);
  return out;
}

/// Every outcome of (xi_1..xi_n), odometer style.
template <class Value, class Fn>
std::map<Value, Rational> enumerate_law(std::size_t n, const std::vector<std::pair<Rational, Rational>>& law,
                                        const Value& zero, Fn&& add) {
  std::map<Value, Rational> out;
  std::vector<std::size_t> digit(n, 0);
  while (true) {
    Value v = zero;
    Rational p = 1;
    for (std::size_t i = 0; i < n; ++i) {
      v = add(v, i, law[digit[i]].first);
      p *= law[digit[i]].second;
    }
    out[v] += p;
    std::size_t i = 0;
    while (i < n && ++digit[i] == law.size()) digit[i++] = 0;
    if (i == n) break;
  }
  return out;
}

inline std::map<Rational, Rational> distribution(const std::vector<Rational>& a,
                                                 const smallball::SignDistribution& xi) {
  return enumerate_law<Rational>(a.size(), law_of(xi), Rational(0),
                                 [&](const Rational& v, std::size_t i, const Rational& s) {
                                   return Rational(v + a[i] * s);
                                 });
}

inline std::map<Point2, Rational> distribution_2d(const std::vector<Point2>& a,
                                                  const smallball::SignDistribution& xi) {
  return enumerate_law<Point2>(a.size(), law_of(xi), Point2(0, 0),
                               [&](const Point2& v, std::size_t i, const Rational& s) { return v + s * a[i]; });
}

inline Rational max_atom(const std::map<Rational, Rational>& law) {
  Rational best = 0;
  for (const auto& [v, p] : law) best = std::max(best, p);
  return best;
}

/// A maximal closed interval of length 2R can be slid right until its left
/// end touches an atom, so try every atom as the left end.
inline Rational ball_1d(const std::map<Rational, Rational>& law, const Rational& radius) {
  Rational best = 0;
  for (const auto& [left, unused] : law) {
    Rational mass = 0;
    for (const auto& [v, p] : law)
      if (v >= left && v <= left + 2 * radius) mass += p;
    best = std::max(best, mass);
  }
  return best;
}

/// Floating-point circle geometry with a tolerance; fine for the small
/// integer configurations used in tests.
inline Rational ball_2d(const std::map<Point2, Rational>& law, const Rational& radius) {
  std::vector<std::pair<double, double>> pts;
  std::vector<Rational> mass;
  for (const auto& [v, p] : law) {
    pts.emplace_back(v.x.get_d(), v.y.get_d());
    mass.push_back(p);
  }
  const double r = radius.get_d();
  std::vector<std::pair<double, double>> centers = pts;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dx = pts[j].first - pts[i].first, dy = pts[j].second - pts[i].second;
      double d = std::hypot(dx, dy);
      if (d > 2 * r + 1e-12 || d == 0) continue;
      double h = std::sqrt(std::max(0.0, r * r - d * d / 4));
      double mx = (pts[i].first + pts[j].first) / 2, my = (pts[i].second + pts[j].second) / 2;
      centers.emplace_back(mx - h * dy / d, my + h * dx / d);
      centers.emplace_back(mx + h * dy / d, my - h * dx / d);
    }
  Rational best = 0;
  for (const auto& c : centers) {
    Rational m = 0;
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (std::hypot(pts[k].first - c.first, pts[k].second - c.second) <= r + 1e-9) m += mass[k];
    best = std::max(best, m);
  }
  return best;
}

inline BigInt binomial(unsigned n, unsigned k) {
  std::vector<BigInt> row{1};
  for (unsigned i = 0; i < n; ++i) {
    std::vector<BigInt> next(row.size() + 1, 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j];
      next[j + 1] += row[j];
    }
    row = std::move(next);
  }
  return k <= n ? row[k] : BigInt(0);
}

inline BigInt largest_binomial_sum(unsigned n, unsigned long m) {
  std::vector<BigInt> c;
  for (unsigned i = 0; i <= n; ++i) c.push_back(binomial(n, i));
  std::sort(c.rbegin(), c.rend());
  BigInt s = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(m, c.size()); ++i) s += c[i];
  return s;
}

/// Fewest entries at distance >= 1 from a line with normal angle theta,
/// by counting entries in [p_i, p_i + 2) for every i.
inline std::size_t far_count_at(const std::vector<Point2>& pts, double theta) {
  std::vector<double> proj;
  for (const auto& p : pts) proj.push_back(p.x.get_d() * std::cos(theta) + p.y.get_d() * std::sin(theta));
  std::size_t near = 0;
  for (double lo : proj) {
    std::size_t c = 0;
    for (double q : proj)
      if (q >= lo && q < lo + 2) ++c;
    near = std::max(near, c);
  }
  return pts.size() - near;
}

inline std::vector<long long> random_integers(std::mt19937_64& rng, std::size_t n, long long lo, long long hi) {
  std::uniform_int_distribution<long long> u(lo, hi);
  std::vector<long long> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline std::vector<Rational> to_rationals(const std::vector<long long>& v) {
  std::vector<Rational> out;
  for (long long x : v) out.emplace_back(BigInt(static_cast<long>(x)));
  return out;
}

}  // namespace oracle
