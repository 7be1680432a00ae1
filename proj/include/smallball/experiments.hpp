#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smallball/arith.hpp"

namespace smallball {

/// splitmix64; small enough to give every trial its own stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of trial i under master_seed. Trials never share a stream, so results
/// do not depend on how trials are scheduled.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t trial);

enum class RunMode { exact, monte_carlo };

struct McReport {
  RunMode mode = RunMode::monte_carlo;
  double estimate = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double std_error = 0;
  std::uint64_t master_seed = 0;
  double wall_clock = 0;
  std::optional<Rational> exact;  // exact mode only
};

McReport mc_report(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed);

enum class Ensemble { bernoulli_iid, bernoulli_symmetric, gaussian_iid };

Ensemble parse_ensemble(const std::string& text);
std::string to_string(Ensemble e);

/// Exact determinant of a small integer matrix by fraction-free elimination.
BigInt bareiss_determinant(std::vector<BigInt> a, std::size_t n);
long long bareiss_determinant_ll(std::vector<long long> a, std::size_t n);

/// Exact singularity test for a +-1 matrix: rank modulo 2^61 - 1 first, and
/// an exact determinant only when that rank is deficient.
bool is_singular_pm1(const std::vector<int>& a, std::size_t n);

/// p_n or p_n^sym. Exact mode enumerates every sign matrix (at most 2^26 free
/// entries); Monte Carlo samples `trials` matrices.
McReport singularity_probability(Ensemble ensemble, std::size_t n, RunMode mode, std::uint64_t trials,
                                 std::uint64_t seed, unsigned workers = 1);

struct UniversalityReport {
  McReport failures;
  double benchmark = 0;  // 1/n
  std::optional<double> closed_form;  // k = 1 only: 1 - (1 - 2^{1-d})^n
};

/// Fraction of trials whose d random +-1 vectors in R^n miss some sign pattern
/// on some k coordinates.
UniversalityReport k_universality_check(std::size_t d, std::size_t n, std::size_t k, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers = 1);

/// 1 - exp(-t^2/2 - t): the limiting law of sqrt(n) sigma_n for real Gaussian
/// matrices.
double edelman_cdf(double t);

struct LsvOptions {
  double tolerance = 1e-10;
  unsigned max_iterations = 2000;
};

struct SigmaMin {
  double value = 0;
  bool converged = true;  // false when the SVD fallback produced the value
};

/// Smallest singular value: QR, then inverse iteration on R^T R; dense SVD if
/// the iteration stalls.
SigmaMin smallest_singular_value(const std::vector<double>& a, std::size_t n, const LsvOptions& options = {});

struct LsvSample {
  Ensemble ensemble;
  std::size_t n = 0;
  std::vector<double> scaled;    // sorted sqrt(n) sigma_n
  std::vector<double> by_trial;  // the same values in trial order
  std::size_t fallbacks = 0;
  std::uint64_t master_seed = 0;
  double quantile(double q) const;
  /// Empirical P(sqrt(n) sigma_n <= t).
  double cdf(double t) const;
};

LsvSample least_singular_value_mc(Ensemble ensemble, std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers = 1, const LsvOptions& options = {});

/// Integer polynomial, coefficient of x^i at index i.
using IntPoly = std::vector<BigInt>;

/// Degree of gcd(p, q) over Q via primitive pseudo-remainder sequences.
std::size_t exact_gcd_degree(IntPoly p, IntPoly q);

/// Whether +-1 polynomials p, q share a complex root: the +-1 test first,
/// then a gcd modulo a large prime, confirmed exactly when nontrivial.
bool share_root_pm1(const std::vector<int>& p, const std::vector<int>& q);

/// Companion-matrix roots of both polynomials; true when some pair of roots
/// lies within tol.
bool share_root_numeric(const std::vector<int>& p, const std::vector<int>& q, double tol);

struct CommonRootReport {
  McReport mc;
  /// P(P1(1) = P2(1) = 0); equal to the x = -1 channel.
  Rational channel_one;
  /// P(common root at 1 or at -1), exact.
  Rational channel_pm1_union;
};

CommonRootReport common_root_probability(std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers = 1);

}  // namespace smallball
