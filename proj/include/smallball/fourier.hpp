#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "smallball/core.hpp"
#include "smallball/parallel.hpp"

namespace smallball {

bool is_prime(std::uint64_t n);
/// Smallest prime strictly greater than n (n < 2^63).
std::uint64_t next_prime_above(std::uint64_t n);

enum class FpMode {
  strict,        // p > 2^n (sum|a_i| + 1); residue identities give exact probabilities
  illustrative,  // any prime; comparisons with the integer law are disabled
};

/// An integer multiset reduced modulo a prime p.
class FpContext {
 public:
  /// With p unset, chooses the smallest prime above 2^n (sum|a_i| + 1).
  /// Throws ValidationError in strict mode when p violates that bound.
  static FpContext create(const CoefficientMultiset& a, std::optional<std::uint64_t> p = std::nullopt,
                          FpMode mode = FpMode::strict);

  std::uint64_t p() const { return p_; }
  FpMode mode() const { return mode_; }
  const std::vector<std::uint64_t>& residues() const { return residues_; }
  const std::vector<long long>& entries() const { return entries_; }
  /// 2^n (sum|a_i| + 1), saturating at 2^64 - 1.
  static std::uint64_t embedding_threshold(const std::vector<long long>& entries);

 private:
  std::uint64_t p_ = 2;
  FpMode mode_ = FpMode::strict;
  std::vector<long long> entries_;
  std::vector<std::uint64_t> residues_;
};

struct FourierIdentity {
  double real = 0;
  double imag = 0;
  /// P(S = target mod p) from the exact integer law (Bernoulli signs).
  Rational exact;
  double abs_error() const { return std::abs(real - exact.get_d()); }
};

/// (1/p) sum_t prod_i cos(2 pi t a_i / p) e_p(-t target).
FourierIdentity fp_fourier_identity(const FpContext& ctx, std::uint64_t target,
                                    unsigned workers = default_workers());

/// (1/p) sum_t exp(-2 sum_i ||a_i t / p||^2), rounded outward. Bounds rho(A)
/// for Bernoulli signs.
double fp_exponential_bound(const FpContext& ctx, unsigned workers = default_workers());

/// Esseen's inequality with the explicit constant of the triangular kernel.
/// The kernel (1-|t|)_+ has transform 2(1 - cos x)/x^2, which is at least
/// 2(1 - cos 1) on |x| <= 1; the constant is the reciprocal.
inline double esseen_constant() { return 1.0 / (2.0 * (1.0 - std::cos(1.0))); }

struct EsseenBound {
  double integral = 0;        // estimate of int_{-1}^{1} prod |phi(t a_i / beta)| dt
  double integral_error = 0;  // quadrature error estimate (absolute)
  double bound = 0;           // C (integral + error), the one-sided bound
};

/// Bounds sup_x P(|S - x| <= beta). Throws QuadratureError when the adaptive
/// rule cannot certify `tolerance`.
EsseenBound esseen_bound(const CoefficientMultiset& a, const Rational& beta,
                         const SignDistribution& xi = SignDistribution::bernoulli(), double tolerance = 1e-10);

/// Ordered 2l-tuples of indices with a_{i1}+..+a_{il} = a_{j1}+..+a_{jl}.
BigInt rl_count(const CoefficientMultiset& a, unsigned l, std::size_t budget = 100'000'000);

/// rho(A) n^{2l+1/2} / R_l.
double halasz_hierarchy_ratio(const CoefficientMultiset& a, unsigned l,
                              const SignDistribution& xi = SignDistribution::bernoulli());

struct LevelSetRow {
  unsigned m = 0;
  std::uint64_t level_size = 0;  // |S_m|
  std::uint64_t dual_size = 0;   // |S*_m|
  bool dual_bound_holds = true;  // |S*_m| |S_m| <= 8p
};

struct LevelSetReport {
  std::uint64_t p = 0;
  std::vector<LevelSetRow> rows;
  Rational rho_reference;
  bool rho_checked = false;          // false in illustrative mode
  std::optional<unsigned> large_m;   // some m with |S_m| e^{-m+2} >= rho p
};

/// S_m = {t : sum ||a_i t/p||^2 <= m}, S*_m = {a : sum_{t in S_m} ||a t/p||^2 <= |S_m|/200},
/// by exhaustive scans, for m = 0..m_max.
LevelSetReport level_and_dual_sets(const FpContext& ctx, unsigned m_max, std::uint64_t scan_budget = 4'000'000'000ULL,
                                   unsigned workers = default_workers());

struct XiNorm {
  Rational squared;  // E ||w (xi1 - xi2)||^2, exact
  double norm = 0;
};

XiNorm xi_norm(const Rational& w, const SignDistribution& xi);

}  // namespace smallball
