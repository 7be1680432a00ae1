#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>

#include "smallball/errors.hpp"
#include "smallball/experiments.hpp"
#include "smallball/parallel.hpp"

namespace smallball {

namespace {

constexpr std::uint64_t kPrime = (1ULL << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  const std::uint64_t s = static_cast<std::uint64_t>(p & kPrime) + static_cast<std::uint64_t>(p >> 61);
  return s >= kPrime ? s - kPrime : s;
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_primitive(IntPoly& p) {
  BigInt g = 0;
  for (const auto& c : p) g = gcd(g, c);
  if (g > 1)
    for (auto& c : p) c /= g;
}

// Degree of gcd over F_p, with p = 2^61 - 1.
std::size_t gcd_degree_mod_p(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  auto strip = [](std::vector<std::uint64_t>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  strip(a);
  strip(b);
  while (!b.empty()) {
    const std::uint64_t inv = powmod(b.back(), kPrime - 2);
    while (a.size() >= b.size()) {
      const std::uint64_t f = mulmod(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        const std::uint64_t sub = mulmod(f, b[i]);
        std::uint64_t& t = a[i + shift];
        t = t >= sub ? t - sub : t + kPrime - sub;
      }
      strip(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

std::vector<std::uint64_t> to_mod_p(const std::vector<int>& p) {
  std::vector<std::uint64_t> out;
  for (int c : p) out.push_back(c >= 0 ? static_cast<std::uint64_t>(c) : kPrime - static_cast<std::uint64_t>(-c));
  return out;
}

std::vector<std::complex<double>> roots_of(const std::vector<int>& p) {
  std::vector<int> c(p);
  while (!c.empty() && c.back() == 0) c.pop_back();
  const Eigen::Index d = static_cast<Eigen::Index>(c.size()) - 1;
  if (d < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) comp(i, i - 1) = 1;
  for (Eigen::Index i = 0; i < d; ++i) comp(i, d - 1) = -static_cast<double>(c[i]) / c[d];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < d; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

Rational balanced_sign_sum(std::size_t m) {
  if (m % 2) return 0;
  return ratio(binomial(static_cast<unsigned>(m), static_cast<unsigned>(m / 2)), BigInt(1) << m);
}

}  // namespace

std::size_t exact_gcd_degree(IntPoly p, IntPoly q) {
  trim(p);
  trim(q);
  if (p.empty() && q.empty()) throw ValidationError("gcd(0, 0) has no degree");
  if (p.size() < q.size()) std::swap(p, q);
  make_primitive(p);
  make_primitive(q);
  while (!q.empty()) {
    // Pseudo-remainder of p by q, then its primitive part.
    IntPoly r = p;
    const BigInt lead = q.back();
    while (r.size() >= q.size()) {
      const BigInt f = r.back();
      const std::size_t shift = r.size() - q.size();
      for (auto& c : r) c *= lead;
      for (std::size_t i = 0; i < q.size(); ++i) r[i + shift] -= f * q[i];
      trim(r);
    }
    make_primitive(r);
    p = std::move(q);
    q = std::move(r);
  }
  return p.size() - 1;
}

bool share_root_pm1(const std::vector<int>& p, const std::vector<int>& q) {
  long s1 = 0, a1 = 0, s2 = 0, a2 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s1 += p[i];
    a1 += (i % 2 ? -1 : 1) * p[i];
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    s2 += q[i];
    a2 += (i % 2 ? -1 : 1) * q[i];
  }
  if ((s1 == 0 && s2 == 0) || (a1 == 0 && a2 == 0)) return true;
  // Leading coefficients are units, so any rational common factor survives
  // reduction mod p with its degree: a trivial gcd mod p is conclusive.
  if (gcd_degree_mod_p(to_mod_p(p), to_mod_p(q)) == 0) return false;
  return exact_gcd_degree(IntPoly(p.begin(), p.end()), IntPoly(q.begin(), q.end())) > 0;
}

bool share_root_numeric(const std::vector<int>& p, const std::vector<int>& q, double tol) {
  const auto rp = roots_of(p), rq = roots_of(q);
  for (const auto& x : rp)
    for (const auto& y : rq)
      if (std::abs(x - y) < tol) return true;
  return false;
}

CommonRootReport common_root_probability(std::size_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (n < 1 || n > 60) throw ValidationError("common roots need 1 <= degree <= 60");
  std::vector<std::uint64_t> hits(chunk_count(trials, 256), 0);
  for_each_chunk(trials, 256, workers, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    std::vector<int> p(n + 1), q(n + 1);
    std::uint64_t count = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng(substream_seed(seed, t));
      const std::uint64_t bp = rng(), bq = rng();
      for (std::size_t i = 0; i <= n; ++i) {
        p[i] = (bp >> i & 1) ? -1 : 1;
        q[i] = (bq >> i & 1) ? -1 : 1;
      }
      count += share_root_pm1(p, q);
    }
    hits[c] = count;
  });
  std::uint64_t s = 0;
  for (auto h : hits) s += h;

  CommonRootReport out;
  out.mc = mc_report(s, trials, seed);
  const Rational one = balanced_sign_sum(n + 1);
  out.channel_one = one * one;
  // P(1) = P(-1) = 0 iff the even-index and odd-index coefficients each sum
  // to zero.
  const std::size_t even = n / 2 + 1, odd = n + 1 - even;
  const Rational both = balanced_sign_sum(even) * balanced_sign_sum(odd);
  out.channel_pm1_union = 2 * out.channel_one - both * both;
  return out;
}

}  // namespace smallball
