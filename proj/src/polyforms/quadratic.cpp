#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "smallball/errors.hpp"
#include "smallball/parallel.hpp"
#include "smallball/polyforms.hpp"

namespace smallball {

using u128 = unsigned __int128;

SymmetricCoefficientMatrix::SymmetricCoefficientMatrix(std::size_t n, std::vector<Rational> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0) throw ValidationError("matrix must be at least 1 x 1");
  if (entries_.size() != n_ * n_) throw ValidationError("matrix needs n^2 entries");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (at(i, j) != at(j, i))
        throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
}

SymmetricCoefficientMatrix SymmetricCoefficientMatrix::parse(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  std::string row;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), '\n', ';');
  std::stringstream rs(normalized);
  while (std::getline(rs, row, ';')) {
    std::replace(row.begin(), row.end(), ',', ' ');
    std::stringstream es(row);
    std::vector<Rational> r;
    std::string tok;
    while (es >> tok) r.push_back(parse_rational(tok));
    if (!r.empty()) rows.push_back(std::move(r));
  }
  const std::size_t n = rows.size();
  std::vector<Rational> flat;
  for (auto& r : rows) {
    if (r.size() != n) throw ValidationError("matrix rows must all have n entries");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return SymmetricCoefficientMatrix(n, std::move(flat));
}

SymmetricCoefficientMatrix SymmetricCoefficientMatrix::all_ones(std::size_t n) {
  return SymmetricCoefficientMatrix(n, std::vector<Rational>(n * n, Rational(1)));
}

SymmetricCoefficientMatrix SymmetricCoefficientMatrix::identity(std::size_t n) {
  std::vector<Rational> e(n * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1;
  return SymmetricCoefficientMatrix(n, std::move(e));
}

SymmetricCoefficientMatrix SymmetricCoefficientMatrix::random_pm1(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) e[i * n + j] = e[j * n + i] = (rng() & 1) ? 1 : -1;
  return SymmetricCoefficientMatrix(n, std::move(e));
}

SymmetricCoefficientMatrix SymmetricCoefficientMatrix::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_) throw ValidationError("permutation length must equal n");
  std::vector<Rational> e(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) e[i * n_ + j] = at(perm[i], perm[j]);
  return SymmetricCoefficientMatrix(n_, std::move(e));
}

SymmetricCoefficientMatrix SymmetricCoefficientMatrix::scaled(const Rational& c) const {
  std::vector<Rational> e(entries_);
  for (auto& x : e) x *= c;
  return SymmetricCoefficientMatrix(n_, std::move(e));
}

std::string SymmetricCoefficientMatrix::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < n_; ++j) out += (j ? " " : "") + to_string(at(i, j));
  }
  return out;
}

namespace {

long long to_ll(const BigInt& z, const char* what) {
  if (!z.fits_slong_p()) throw BudgetError(std::string(what) + " does not fit in 64 bits after scaling");
  return z.get_si();
}

struct ScaledForm {
  std::size_t n = 0;
  std::vector<long long> a;  // row-major, times `scale`
  BigInt scale = 1;
};

ScaledForm scale_matrix(const SymmetricCoefficientMatrix& m) {
  ScaledForm f;
  f.n = m.n();
  for (const auto& x : m.entries()) f.scale = lcm(f.scale, x.get_den());
  for (const auto& x : m.entries()) f.a.push_back(to_ll(x.get_num() * (f.scale / x.get_den()), "matrix entry"));
  return f;
}

}  // namespace

QuadraticConcentration quadratic_concentration(const SymmetricCoefficientMatrix& m, const SignDistribution& xi,
                                               unsigned workers, std::uint64_t budget) {
  const std::size_t n = m.n();
  if (n > kQuadraticLimit) throw BudgetError("quadratic concentration is limited to n <= 24");
  const std::size_t s = xi.support_size();
  const long double configs = std::pow(static_cast<long double>(s), static_cast<long double>(n));
  if (configs > static_cast<long double>(budget))
    throw BudgetError("quadratic enumeration needs more than the budgeted outcome vectors");

  const ScaledForm f = scale_matrix(m);
  BigInt dx = 1;
  for (const auto& atom : xi.atoms()) dx = lcm(dx, atom.value.get_den());
  std::vector<long long> xv, wv;
  long long xmax = 0;
  for (std::size_t k = 0; k < s; ++k) {
    const auto& atom = xi.atoms()[k];
    xv.push_back(to_ll(atom.value.get_num() * (dx / atom.value.get_den()), "xi value"));
    xmax = std::max(xmax, std::abs(xv.back()));
    wv.push_back(to_ll(xi.weights()[k], "xi weight"));
  }
  long double reach = 0;
  for (long long v : f.a) reach += std::abs(static_cast<long double>(v));
  if (reach * xmax * xmax * 4 > 4e18L) throw BudgetError("quadratic form values would overflow 64 bits");
  const bool uniform = std::all_of(wv.begin(), wv.end(), [&](long long w) { return w == wv[0]; });
  const long double den_bits = n * std::log2(static_cast<long double>(xi.denominator().get_d()));
  if (!uniform && den_bits > 120) throw BudgetError("outcome weights would overflow 128 bits");

  // The top `high` coordinates index the chunks; the rest run an odometer
  // with O(n) incremental updates of the form and of r = A x.
  std::size_t high = 0;
  for (std::uint64_t c = 1; high < n && c * s <= 4096 && (n - high) > 4; c *= s) ++high;
  const std::size_t low = n - high;
  std::uint64_t chunks = 1;
  for (std::size_t k = 0; k < high; ++k) chunks *= s;

  std::vector<std::unordered_map<long long, u128>> partial(chunks);
  for_each_chunk(chunks, 1, workers, [&](std::uint64_t c, std::uint64_t, std::uint64_t) {
    std::vector<std::size_t> digit(n, 0);
    std::uint64_t rest = c;
    for (std::size_t k = low; k < n; ++k) {
      digit[k] = rest % s;
      rest /= s;
    }
    std::vector<long long> x(n), r(n, 0);
    for (std::size_t k = 0; k < n; ++k) x[k] = xv[digit[k]];
    long long q = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) r[i] += f.a[i * n + j] * x[j];
      q += x[i] * r[i];
    }
    // suffix[k] = product of weights of digits k..n-1.
    std::vector<u128> suffix(n + 1, 1);
    if (!uniform)
      for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * static_cast<u128>(wv[digit[k]]);
    auto& tally = partial[c];
    auto shift = [&](std::size_t k, std::size_t to) {
      const long long d = xv[to] - x[k];
      q += 2 * d * r[k] + f.a[k * n + k] * d * d;
      for (std::size_t j = 0; j < n; ++j) r[j] += f.a[j * n + k] * d;
      x[k] = xv[to];
      digit[k] = to;
    };
    for (;;) {
      tally[q] += uniform ? 1 : suffix[0];
      std::size_t k = 0;
      while (k < low && digit[k] + 1 == s) {
        shift(k, 0);
        ++k;
      }
      if (k == low) break;
      shift(k, digit[k] + 1);
      if (!uniform)
        for (std::size_t t = k + 1; t-- > 0;) suffix[t] = suffix[t + 1] * static_cast<u128>(wv[digit[t]]);
    }
  });

  std::unordered_map<long long, u128> total;
  for (auto& p : partial)
    for (const auto& [v, w] : p) total[v] += w;
  long long best_v = 0;
  u128 best_w = 0;
  for (const auto& [v, w] : total)
    if (w > best_w || (w == best_w && v < best_v)) {
      best_w = w;
      best_v = v;
    }
  auto big = [](u128 v) {
    BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
    return BigInt((hi << 64) + lo);
  };
  BigInt den = 1;
  for (std::size_t k = 0; k < n; ++k) den *= uniform ? BigInt(static_cast<unsigned long>(s)) : xi.denominator();
  QuadraticConcentration out;
  out.rho = ratio(big(best_w), den);
  out.argmax = ratio(BigInt(static_cast<long>(best_v)), f.scale * dx * dx);
  out.distinct_values = total.size();
  return out;
}

DecouplingResult decoupling_check(const SymmetricCoefficientMatrix& m, const std::vector<std::size_t>& first,
                                  const Rational& x) {
  const std::size_t n = m.n();
  if (n > 16) throw BudgetError("decoupling check is limited to n <= 16");
  std::vector<char> in_first(n, 0);
  for (std::size_t i : first) {
    if (i >= n || in_first[i]) throw ValidationError("partition indices must be distinct and below n");
    in_first[i] = 1;
  }
  std::vector<std::size_t> u1, u2;
  for (std::size_t i = 0; i < n; ++i) (in_first[i] ? u1 : u2).push_back(i);

  const ScaledForm f = scale_matrix(m);
  DecouplingResult out;
  const Rational target_scaled = x * f.scale;
  if (target_scaled.get_den() != 1) {
    out.holds = true;
    return out;
  }
  const long long target = to_ll(target_scaled.get_num(), "target");

  const std::size_t ny = std::size_t{1} << u1.size(), nz = std::size_t{1} << u2.size();
  const std::size_t words = (nz + 63) / 64;
  // hit[y] is the bit set of z with Q(y, z) = x.
  std::vector<std::uint64_t> hit(ny * words, 0);
  std::vector<long long> sig(n);
  std::uint64_t events = 0;
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t z = 0; z < nz; ++z) {
      for (std::size_t k = 0; k < u1.size(); ++k) sig[u1[k]] = (y >> k & 1) ? -1 : 1;
      for (std::size_t k = 0; k < u2.size(); ++k) sig[u2[k]] = (z >> k & 1) ? -1 : 1;
      long long q = 0;
      for (std::size_t i = 0; i < n; ++i) {
        long long row = 0;
        for (std::size_t j = 0; j < n; ++j) row += f.a[i * n + j] * sig[j];
        q += sig[i] * row;
      }
      if (q == target) {
        hit[y * words + z / 64] |= std::uint64_t{1} << (z % 64);
        ++events;
      }
    }
  BigInt joint = 0;
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t y2 = 0; y2 < ny; ++y2) {
      std::uint64_t c = 0;
      for (std::size_t w = 0; w < words; ++w) c += __builtin_popcountll(hit[y * words + w] & hit[y2 * words + w]);
      joint += BigInt(static_cast<unsigned long>(c * c));
    }
  out.lhs = ratio(BigInt(static_cast<unsigned long>(events)), BigInt(1) << n);
  out.joint = ratio(joint, BigInt(1) << (2 * n));
  out.rhs = std::pow(out.joint.get_d(), 0.25);
  const Rational l2 = out.lhs * out.lhs;
  out.holds = l2 * l2 <= out.joint;
  return out;
}

QuadKind parse_quad_kind(const std::string& text) {
  if (text == "gap") return QuadKind::gap;
  if (text == "lowrank") return QuadKind::lowrank;
  if (text == "mixed") return QuadKind::mixed;
  throw ValidationError("unknown quadratic generator kind '" + text + "' (gap, lowrank, mixed)");
}

QuadGenResult structured_quadratic_generator(const QuadGenParams& params, std::uint64_t seed, unsigned workers) {
  const std::size_t n = params.n;
  if (n < 1 || n > 20) throw ValidationError("structured generator needs 1 <= n <= 20");
  const bool use_gap = params.kind != QuadKind::lowrank;
  const bool use_low = params.kind != QuadKind::gap;
  std::mt19937_64 rng(seed);

  std::vector<Rational> e(n * n, Rational(0));
  Rational floor_value = 1;
  if (use_gap) {
    if (!params.pool.symmetric()) throw ValidationError("entry pool must be a symmetric GAP");
    const auto pts = gap_materialize(params.pool).points;
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) e[i * n + j] = e[j * n + i] = pts[pick(rng)];
    const BigInt vol = gap_dilate(params.pool, static_cast<long long>(n * n)).volume();
    floor_value /= Rational(vol);
  }
  if (use_low) {
    std::vector<long long> k = params.k, b = params.b;
    if (k.empty())
      for (std::size_t i = 0; i < n; ++i) k.push_back(i % 2 ? -1 : 1);
    if (b.empty()) {
      if (params.b_range < 0) throw ValidationError("b_range must be non-negative");
      std::uniform_int_distribution<long long> draw(-params.b_range, params.b_range);
      for (std::size_t i = 0; i < n; ++i) b.push_back(draw(rng));
    }
    if (k.size() != n || b.size() != n) throw ValidationError("k and b must have n entries");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        e[i * n + j] += Rational(BigInt(static_cast<long>(k[i] * b[j] + k[j] * b[i])));
    if (std::any_of(k.begin(), k.end(), [](long long v) { return v != 0; })) {
      auto law = exact_sign_sum_distribution(CoefficientMultiset::integers(k), SignDistribution::bernoulli());
      floor_value *= law.mass_at(Rational(0));
    }
  }
  QuadGenResult out{SymmetricCoefficientMatrix(n, std::move(e)), 0, floor_value, 0};
  out.rho_q = quadratic_concentration(out.matrix, SignDistribution::bernoulli(), workers).rho;
  out.floor_exponent = n > 1 && floor_value > 0 ? -std::log(floor_value.get_d()) / std::log(static_cast<double>(n)) : 0;
  return out;
}

}  // namespace smallball
