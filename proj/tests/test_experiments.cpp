#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "smallball/errors.hpp"
#include "smallball/experiments.hpp"

using namespace smallball;

namespace {

long long cofactor_det(const std::vector<long long>& a, std::size_t n) {
  if (n == 1) return a[0];
  long long total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<long long> minor;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) minor.push_back(a[i * n + j]);
    total += (c % 2 ? -1 : 1) * a[c] * cofactor_det(minor, n - 1);
  }
  return total;
}

bool within_sigmas(const McReport& r, double truth, double k = 4) {
  const double se = std::sqrt(truth * (1 - truth) / static_cast<double>(r.trials));
  return std::abs(r.estimate - truth) <= k * se + 1e-12;
}

// Exact probability that d uniformly random vectors in {0,1}^n miss a pattern
// on some k coordinates, by enumerating every configuration.
double brute_universality_failure(std::size_t d, std::size_t n, std::size_t k) {
  const std::uint64_t total = std::uint64_t{1} << (d * n);
  std::uint64_t fails = 0;
  for (std::uint64_t cfg = 0; cfg < total; ++cfg) {
    bool ok = true;
    for (std::uint64_t sub = 0; sub < (1u << n) && ok; ++sub) {
      if (static_cast<std::size_t>(__builtin_popcountll(sub)) != k) continue;
      std::uint64_t seen = 0;
      for (std::size_t v = 0; v < d; ++v) {
        const std::uint64_t vec = cfg >> (v * n) & ((1u << n) - 1);
        std::uint64_t pat = 0;
        for (std::size_t i = 0, j = 0; i < n; ++i)
          if (sub >> i & 1) pat |= (vec >> i & 1) << j++;
        seen |= std::uint64_t{1} << pat;
      }
      ok = __builtin_popcountll(seen) == (1 << k);
    }
    fails += !ok;
  }
  return static_cast<double>(fails) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("bareiss agrees with cofactor expansion") {
  for (unsigned mask = 0; mask < 512; ++mask) {
    std::vector<long long> a(9);
    for (int i = 0; i < 9; ++i) a[i] = (mask >> i & 1) ? -1 : 1;
    const long long ref = cofactor_det(a, 3);
    CHECK(bareiss_determinant_ll(a, 3) == ref);
    std::vector<BigInt> big;
    for (long long x : a) big.emplace_back(static_cast<long>(x));
    CHECK(bareiss_determinant(big, 3) == BigInt(static_cast<long>(ref)));
    std::vector<int> ai(a.begin(), a.end());
    CHECK(is_singular_pm1(ai, 3) == (ref == 0));
  }
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 5;
    std::vector<long long> a(n * n);
    for (auto& x : a) x = e(rng);
    CHECK(bareiss_determinant_ll(a, n) == cofactor_det(a, n));
  }
}

TEST_CASE("exact singularity probabilities for small n") {
  const auto p1 = singularity_probability(Ensemble::bernoulli_iid, 1, RunMode::exact, 0, 1);
  CHECK(*p1.exact == 0);
  const auto p2 = singularity_probability(Ensemble::bernoulli_iid, 2, RunMode::exact, 0, 1);
  CHECK(*p2.exact == ratio(1, 2));
  const auto s2 = singularity_probability(Ensemble::bernoulli_symmetric, 2, RunMode::exact, 0, 1);
  CHECK(*s2.exact == ratio(1, 2));

  long singular = 0;
  for (unsigned mask = 0; mask < 512; ++mask) {
    std::vector<long long> a(9);
    for (int i = 0; i < 9; ++i) a[i] = (mask >> i & 1) ? -1 : 1;
    singular += cofactor_det(a, 3) == 0;
  }
  const auto p3 = singularity_probability(Ensemble::bernoulli_iid, 3, RunMode::exact, 0, 1);
  CHECK(*p3.exact == ratio(singular, 512));

  CHECK_THROWS_AS(singularity_probability(Ensemble::bernoulli_iid, 6, RunMode::exact, 0, 1), BudgetError);
  CHECK_THROWS_AS(singularity_probability(Ensemble::gaussian_iid, 3, RunMode::monte_carlo, 10, 1), ValidationError);
}

TEST_CASE("monte carlo singularity tracks the exact value") {
  const auto exact = singularity_probability(Ensemble::bernoulli_iid, 4, RunMode::exact, 0, 1, 2);
  const auto mc = singularity_probability(Ensemble::bernoulli_iid, 4, RunMode::monte_carlo, 20000, 99);
  CHECK(within_sigmas(mc, exact.exact->get_d()));

  const auto sym = singularity_probability(Ensemble::bernoulli_symmetric, 4, RunMode::exact, 0, 1);
  const auto sym_mc = singularity_probability(Ensemble::bernoulli_symmetric, 4, RunMode::monte_carlo, 20000, 7);
  CHECK(within_sigmas(sym_mc, sym.exact->get_d()));
}

TEST_CASE("monte carlo results do not depend on the worker count") {
  const auto a = singularity_probability(Ensemble::bernoulli_iid, 8, RunMode::monte_carlo, 3000, 42, 1);
  const auto b = singularity_probability(Ensemble::bernoulli_iid, 8, RunMode::monte_carlo, 3000, 42, 3);
  CHECK(a.successes == b.successes);
  const auto u1 = k_universality_check(12, 10, 2, 2000, 3, 1);
  const auto u2 = k_universality_check(12, 10, 2, 2000, 3, 4);
  CHECK(u1.failures.successes == u2.failures.successes);
  const auto l1 = least_singular_value_mc(Ensemble::gaussian_iid, 10, 100, 8, 1);
  const auto l2 = least_singular_value_mc(Ensemble::gaussian_iid, 10, 100, 8, 3);
  CHECK(l1.scaled == l2.scaled);
  CHECK(substream_seed(1, 0) != substream_seed(1, 1));
  CHECK(substream_seed(1, 0) != substream_seed(2, 0));
}

TEST_CASE("k-universality") {
  CHECK(k_universality_check(3, 10, 0, 500, 1).failures.successes == 0);

  const auto one = k_universality_check(6, 20, 1, 20000, 11);
  REQUIRE(one.closed_form);
  CHECK(within_sigmas(one.failures, *one.closed_form));
  CHECK(one.benchmark == doctest::Approx(0.05));

  const double truth = brute_universality_failure(5, 4, 2);
  const auto two = k_universality_check(5, 4, 2, 20000, 13);
  CHECK(within_sigmas(two.failures, truth));

  // Fewer than 2^k vectors can never be universal.
  CHECK(k_universality_check(3, 6, 2, 300, 1).failures.successes == 300);
  CHECK_THROWS_AS(k_universality_check(40, 64, 20, 10, 1), BudgetError);
}

TEST_CASE("edelman law integrates its density") {
  double integral = 0;
  const double h = 1e-4;
  for (double t = 0; t < 3; t += h) {
    auto f = [](double s) { return (1 + s) * std::exp(-s * s / 2 - s); };
    integral += h * (f(t) + f(t + h)) / 2;
    const double next = t + h;
    if (std::abs(next - 1.0) < h / 2) CHECK(integral == doctest::Approx(edelman_cdf(1.0)).epsilon(1e-6));
  }
  CHECK(edelman_cdf(0) == 0);
  CHECK(edelman_cdf(50) == doctest::Approx(1.0));
}

TEST_CASE("smallest singular value matches a dense SVD") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + t % 12;
    std::vector<double> a(n * n);
    for (auto& x : a) x = g(rng);
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i * n + j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double ref = svd.singularValues().minCoeff();
    CHECK(smallest_singular_value(a, n).value == doctest::Approx(ref).epsilon(1e-8));
  }
  CHECK(smallest_singular_value({3, 0, 0, 0, 0.5, 0, 0, 0, 2}, 3).value == doctest::Approx(0.5));
  CHECK(smallest_singular_value({1, 1, 1, 1}, 2).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("least singular value sampling") {
  const auto empty = least_singular_value_mc(Ensemble::gaussian_iid, 5, 0, 1);
  CHECK(empty.scaled.empty());
  CHECK(std::isnan(empty.quantile(0.5)));

  const auto s = least_singular_value_mc(Ensemble::gaussian_iid, 30, 2000, 21);
  CHECK(std::is_sorted(s.scaled.begin(), s.scaled.end()));
  for (double t : {0.25, 0.5, 1.0, 2.0}) CHECK(std::abs(s.cdf(t) - edelman_cdf(t)) < 0.05);
  CHECK(s.quantile(0) == s.scaled.front());
  CHECK(s.quantile(1) == s.scaled.back());

  const auto b = least_singular_value_mc(Ensemble::bernoulli_iid, 2, 400, 3);
  // Half of all 2x2 sign matrices are singular.
  CHECK(std::abs(b.cdf(1e-9) - 0.5) < 0.1);
}

TEST_CASE("polynomial gcd degree") {
  // (x-1)(x+2) and (x-1)(x+3)
  CHECK(exact_gcd_degree({-2, 1, 1}, {-3, 2, 1}) == 1);
  CHECK(exact_gcd_degree({1, 0, 1}, {1, 1}) == 0);
  // (x^2+1)(x+5) and (x^2+1)(2x-7)
  CHECK(exact_gcd_degree({5, 1, 5, 1}, {-7, 2, -7, 2}) == 2);
  CHECK(exact_gcd_degree({0, 0, 4}, {0, 6}) == 1);
  CHECK_THROWS_AS(exact_gcd_degree({}, {0}), ValidationError);
}

TEST_CASE("shared roots: exact route agrees with companion eigenvalues") {
  std::mt19937_64 rng(23);
  int positives = 0;
  for (int t = 0; t < 3000; ++t) {
    const std::size_t n = 2 + t % 6;
    std::vector<int> p(n + 1), q(n + 1);
    for (auto& c : p) c = (rng() & 1) ? 1 : -1;
    for (auto& c : q) c = (rng() & 1) ? 1 : -1;
    const bool exact = share_root_pm1(p, q);
    positives += exact;
    // Repeated roots at +-1 only resolve to about eps^(1/m), hence the loose tolerance.
    CHECK(exact == share_root_numeric(p, q, 1e-3));
  }
  CHECK(positives > 100);
  // x^2 + x + 1 and x^3 - 1 share the primitive cube roots of unity.
  CHECK(share_root_pm1({1, 1, 1, 0}, {-1, 0, 0, 1}));
}

TEST_CASE("common root channels") {
  const auto r3 = common_root_probability(3, 0, 1);
  CHECK(r3.channel_one == ratio(9, 64));
  const auto r4 = common_root_probability(4, 0, 1);
  CHECK(r4.channel_one == 0);

  // Exhaustive count of the +-1 channel for n = 3 against direct evaluation.
  std::uint64_t hits = 0, shared = 0;
  for (unsigned bp = 0; bp < 16; ++bp)
    for (unsigned bq = 0; bq < 16; ++bq) {
      std::vector<int> p(4), q(4);
      for (int i = 0; i < 4; ++i) {
        p[i] = (bp >> i & 1) ? -1 : 1;
        q[i] = (bq >> i & 1) ? -1 : 1;
      }
      auto at = [](const std::vector<int>& f, int x) {
        int v = 0, pw = 1;
        for (int c : f) {
          v += c * pw;
          pw *= x;
        }
        return v;
      };
      hits += (at(p, 1) == 0 && at(q, 1) == 0) || (at(p, -1) == 0 && at(q, -1) == 0);
      shared += share_root_pm1(p, q);
    }
  CHECK(r3.channel_pm1_union == ratio(static_cast<long>(hits), 256));
  CHECK(shared >= hits);

  const auto mc = common_root_probability(6, 20000, 5);
  CHECK(mc.mc.estimate >= mc.channel_pm1_union.get_d() - 4 * mc.mc.std_error - 1e-3);
}

TEST_CASE("edelman series near zero") {
  for (double t : {0.1, 0.05, 0.025}) {
    const double rem = (edelman_cdf(t) - (t - t * t * t / 3)) / std::pow(t, 4);
    // The t^4 coefficient of 1 - exp(-t - t^2/2) is 1/12.
    CHECK(rem == doctest::Approx(1.0 / 12).epsilon(0.1));
    CHECK(std::abs(rem) <= 0.6);
  }
}

TEST_CASE("k-universality stays near the 1/n benchmark once d is large enough") {
  // At d = n/2 = 12 almost every trial misses a pattern (about 35 expected
  // misses), so the benchmark is checked at d = 40, where the union bound is ~0.011.
  const auto half = k_universality_check(12, 24, 2, 2000, 31);
  CHECK(half.failures.estimate > 0.9);
  const auto r = k_universality_check(40, 24, 2, 10000, 31);
  CHECK(r.failures.estimate <= 5 * r.benchmark);
}

TEST_CASE("gcd route against companion eigenvalues at degree 20") {
  std::mt19937_64 rng(77);
  int exact_only = 0, numeric_only = 0;
  for (int t = 0; t < 10000; ++t) {
    std::vector<int> p(21), q(21);
    for (auto& c : p) c = (rng() & 1) ? 1 : -1;
    for (auto& c : q) c = (rng() & 1) ? 1 : -1;
    const bool exact = share_root_pm1(p, q);
    const bool numeric = share_root_numeric(p, q, 1e-6);
    exact_only += exact && !numeric;
    numeric_only += numeric && !exact;
  }
  MESSAGE("degree 20: exact-only " << exact_only << ", numeric-only " << numeric_only);
  CHECK(exact_only + numeric_only <= 100);
}
