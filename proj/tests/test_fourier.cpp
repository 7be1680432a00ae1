#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smallball/errors.hpp"
#include "smallball/fourier.hpp"

using namespace smallball;

namespace {

BigInt brute_rl(const std::vector<long long>& a, unsigned l) {
  const std::size_t n = a.size();
  std::size_t total = 1;
  for (unsigned i = 0; i < 2 * l; ++i) total *= n;
  BigInt count = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    long long lhs = 0, rhs = 0;
    for (unsigned i = 0; i < 2 * l; ++i) {
      (i < l ? lhs : rhs) += a[c % n];
      c /= n;
    }
    if (lhs == rhs) ++count;
  }
  return count;
}

std::size_t brute_level(const std::vector<long long>& a, std::uint64_t p, unsigned m) {
  std::size_t c = 0;
  for (std::uint64_t t = 0; t < p; ++t) {
    Rational s = 0;
    for (long long x : a) {
      Rational u = torus_norm(ratio(BigInt(static_cast<long>(x)) * static_cast<unsigned long>(t),
                                    static_cast<unsigned long>(p)));
      s += u * u;
    }
    if (s <= m) ++c;
  }
  return c;
}

}  // namespace

TEST_CASE("primality") {
  CHECK(is_prime(2));
  CHECK(is_prime(997));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));
  CHECK(is_prime(2305843009213693951ULL));
  CHECK_FALSE(is_prime(3215031751ULL));
  CHECK(next_prime_above(100) == 101);
  CHECK(next_prime_above(101) == 103);
  std::size_t count = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) count += is_prime(k);
  CHECK(count == 1229);
}

TEST_CASE("embedding condition") {
  auto a = CoefficientMultiset::integers({1, 1});
  CHECK_THROWS_AS(FpContext::create(a, 11), ValidationError);
  CHECK_THROWS_AS(FpContext::create(a, 12, FpMode::illustrative), ValidationError);
  CHECK(FpContext::create(a).p() == 13);
  CHECK(FpContext::create(a, 11, FpMode::illustrative).p() == 11);
}

TEST_CASE("fourier identity examples") {
  auto r = fp_fourier_identity(FpContext::create(CoefficientMultiset::integers({1, 1}), 11, FpMode::illustrative), 0);
  CHECK(r.exact == ratio(1, 2));
  CHECK(r.real == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(r.imag) < 1e-9);
  r = fp_fourier_identity(FpContext::create(CoefficientMultiset::integers({1}), 7), 1);
  CHECK(r.exact == ratio(1, 2));
  CHECK(r.abs_error() < 1e-9);
  r = fp_fourier_identity(FpContext::create(CoefficientMultiset::integers({1, 2, 3}), 101), 0);
  CHECK(r.exact == ratio(1, 4));
  CHECK(r.abs_error() < 1e-9);
}

TEST_CASE("fourier identity on random multisets, worker-count independent") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    auto v = oracle::random_integers(rng, 1 + rng() % 8, -6, 6);
    auto ctx = FpContext::create(CoefficientMultiset::integers(v));
    const std::uint64_t target = rng() % ctx.p();
    auto one = fp_fourier_identity(ctx, target, 1);
    auto three = fp_fourier_identity(ctx, target, 3);
    CHECK(one.abs_error() < 1e-9);
    CHECK(std::abs(one.imag) < 1e-9);
    CHECK(one.real == three.real);
    // Strict embedding: the residue law equals the integer law.
    auto brute = oracle::distribution(oracle::to_rationals(v), SignDistribution::bernoulli());
    Rational expect = 0;
    for (const auto& [val, p] : brute) {
      BigInt r;
      mpz_fdiv_r_ui(r.get_mpz_t(), val.get_num_mpz_t(), ctx.p());
      if (r == static_cast<unsigned long>(target)) expect += p;
    }
    CHECK(one.exact == expect);
  }
}

TEST_CASE("exponential bound soundness and slack") {
  auto ones4 = CoefficientMultiset::integers({1, 1, 1, 1});
  CHECK(fp_exponential_bound(FpContext::create(ones4, 10007)) >= 3.0 / 8);
  CHECK(fp_exponential_bound(FpContext::create(CoefficientMultiset::integers({1}))) >= 0.5);
  auto ones12 = CoefficientMultiset::integers(std::vector<long long>(12, 1));
  const double rho12 = concentration_probability(ones12, SignDistribution::bernoulli()).rho.get_d();
  const double b = fp_exponential_bound(FpContext::create(ones12));
  CHECK(b >= rho12);
  CHECK(b / rho12 <= 4);
}

TEST_CASE("esseen bound") {
  const auto ber = SignDistribution::bernoulli();
  auto ones16 = CoefficientMultiset::integers(std::vector<long long>(16, 1));
  auto e = esseen_bound(ones16, 1);
  CHECK(e.bound >= 10016.0 / 65536);
  CHECK(e.bound == doctest::Approx(esseen_constant() * 2 * 0.3128).epsilon(0.02));
  CHECK(esseen_bound(CoefficientMultiset::integers({1}), 1).bound >= 1);
  std::vector<long long> twelve;
  for (int i = 1; i <= 12; ++i) twelve.push_back(i);
  auto a12 = CoefficientMultiset::integers(twelve);
  CHECK(esseen_bound(a12, ratio(1, 2)).bound >= ball_probability_1d(a12, ber, ratio(1, 2)).p.get_d());
  // The constant: 1 / (2 (1 - cos 1)).
  CHECK(esseen_constant() == doctest::Approx(1.0877).epsilon(1e-4));
  // Non-Bernoulli laws go through the general characteristic function.
  auto lazy = SignDistribution::lazy(ratio(1, 2));
  auto ea = esseen_bound(CoefficientMultiset::integers({1, 2, 3, 4, 5}), 1, lazy);
  CHECK(ea.bound >= ball_probability_1d(CoefficientMultiset::integers({1, 2, 3, 4, 5}), lazy, 1).p.get_d());
  CHECK_THROWS_AS(esseen_bound(ones16, 0), ValidationError);
}

TEST_CASE("esseen bound decays like n^{-1/2} on all-ones") {
  double prev = 10;
  for (int n : {16, 64, 256}) {
    auto a = CoefficientMultiset::integers(std::vector<long long>(n, 1));
    double b = esseen_bound(a, 1).bound;
    CHECK(b * std::sqrt(n) < 3.0);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("rl_count") {
  CHECK(rl_count(CoefficientMultiset::integers({1, 2, 3, 4, 5}), 1) == 5);
  CHECK(rl_count(CoefficientMultiset::integers({1, 1}), 1) == 4);
  CHECK(rl_count(CoefficientMultiset::integers({1, 2, 3, 4}), 2) == 44);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    auto v = oracle::random_integers(rng, 1 + rng() % 5, -4, 4);
    unsigned l = 1 + trial % 3;
    CHECK(rl_count(CoefficientMultiset::integers(v), l) == brute_rl(v, l));
  }
  CHECK_THROWS_AS(rl_count(CoefficientMultiset::integers({1, 2}), 0), ValidationError);
  CHECK_THROWS_AS(rl_count(CoefficientMultiset::integers({1, 10, 100, 1000, 10000}), 6, 100), BudgetError);
}

TEST_CASE("halasz hierarchy ratios stay bounded") {
  std::vector<double> r;
  for (int n : {6, 8, 10, 12}) {
    std::vector<long long> v;
    for (int i = 1; i <= n; ++i) v.push_back(i);
    r.push_back(halasz_hierarchy_ratio(CoefficientMultiset::integers(v), 1));
  }
  CHECK(*std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()) <= 3);
  std::vector<double> ones;
  for (int n : {6, 10, 14, 18}) ones.push_back(halasz_hierarchy_ratio(CoefficientMultiset::integers(std::vector<long long>(n, 1)), 1));
  CHECK(*std::max_element(ones.begin(), ones.end()) / *std::min_element(ones.begin(), ones.end()) <= 1.5);
  // Sidon sets: pairwise sums distinct.
  std::vector<double> sidon;
  for (const auto& v : {std::vector<long long>{1, 2, 5, 11, 24, 38}, std::vector<long long>{1, 2, 5, 11, 24, 38, 59, 77},
                        std::vector<long long>{1, 2, 5, 11, 24, 38, 59, 77, 101, 134}})
    sidon.push_back(halasz_hierarchy_ratio(CoefficientMultiset::integers(v), 2));
  CHECK(*std::max_element(sidon.begin(), sidon.end()) / *std::min_element(sidon.begin(), sidon.end()) <= 10);
}

TEST_CASE("level and dual sets") {
  auto ones10 = CoefficientMultiset::integers(std::vector<long long>(10, 1));
  auto ctx = FpContext::create(ones10, 997, FpMode::illustrative);
  auto rep = level_and_dual_sets(ctx, 2);
  CHECK(rep.rows[1].level_size == 2 * static_cast<std::uint64_t>(std::floor(997 / std::sqrt(10.0))) + 1);
  CHECK(rep.rows[1].level_size == 631);
  CHECK(rep.rows[0].level_size >= 1);
  CHECK_FALSE(rep.rho_checked);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    auto v = oracle::random_integers(rng, 2 + rng() % 5, 1, 9);
    const std::uint64_t p = std::vector<std::uint64_t>{101, 211, 307}[trial % 3];
    auto c = FpContext::create(CoefficientMultiset::integers(v), p, FpMode::illustrative);
    auto r = level_and_dual_sets(c, 4);
    for (unsigned m = 0; m <= 4; ++m) {
      CHECK(r.rows[m].level_size == brute_level(v, p, m));
      CHECK(r.rows[m].dual_bound_holds);
      if (m) CHECK(r.rows[m].level_size >= r.rows[m - 1].level_size);
    }
  }

  auto five = FpContext::create(CoefficientMultiset::integers({1, 2, 3, 4, 5}), 499, FpMode::illustrative);
  for (const auto& row : level_and_dual_sets(five, 6).rows) {
    CHECK(row.dual_bound_holds);
    CHECK(row.dual_size * row.level_size <= 8 * 499);
  }
  // Strict mode enables the large-level-set check.
  auto strict = FpContext::create(CoefficientMultiset::integers({1, 1, 1}));
  auto sr = level_and_dual_sets(strict, 6);
  CHECK(sr.rho_checked);
  CHECK(sr.large_m.has_value());
}

TEST_CASE("dual set agrees with a direct rational scan") {
  auto ctx = FpContext::create(CoefficientMultiset::integers({1, 3, 4}), 53, FpMode::illustrative);
  auto rep = level_and_dual_sets(ctx, 2);
  for (const auto& row : rep.rows) {
    std::vector<std::uint64_t> level;
    for (std::uint64_t t = 0; t < 53; ++t) {
      Rational s = 0;
      for (long a : {1L, 3L, 4L}) {
        Rational u = torus_norm(ratio(a * static_cast<long>(t), 53));
        s += u * u;
      }
      if (s <= row.m) level.push_back(t);
    }
    std::uint64_t dual = 0;
    for (std::uint64_t a = 0; a < 53; ++a) {
      Rational s = 0;
      for (auto t : level) {
        Rational u = torus_norm(ratio(static_cast<long>(a * t), 53));
        s += u * u;
      }
      if (s <= ratio(static_cast<long>(level.size()), 200)) ++dual;
    }
    CHECK(row.dual_size == dual);
  }
}

TEST_CASE("xi norm") {
  const auto ber = SignDistribution::bernoulli();
  CHECK(xi_norm(ratio(1, 2), ber).norm == 0);
  CHECK(xi_norm(0, ber).norm == 0);
  CHECK(xi_norm(ratio(1, 4), ber).squared == ratio(1, 8));
  CHECK(xi_norm(ratio(1, 4), ber).norm == doctest::Approx(1 / std::sqrt(8.0)));
}
