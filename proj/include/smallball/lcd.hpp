#pragma once

#include <string>
#include <vector>

#include "smallball/core.hpp"

namespace smallball {

struct LcdParams {
  double alpha = 0.5;
  double gamma = 0.5;
  /// Scan ceiling; <= 0 means the default sqrt(n) / gamma.
  double theta_max = 0;
};

struct LcdResult {
  bool finite = false;
  /// Infimum of the qualifying set (open, so generally not attained).
  double lcd = 0;
  /// A point of the qualifying set close to lcd, with its lattice point.
  double witness_theta = 0;
  std::vector<double> witness_direction;  // unit vector; empty in 1-D
  std::vector<long long> witness_integers;
  double achieved_distance = 0;
  /// min(gamma ||theta a||, alpha) - dist at the witness; positive.
  double slack = 0;
  double theta_max = 0;
  std::string certificate;
};

/// inf{theta > 0 : dist(theta a, Z^n) < min(gamma ||theta a||, alpha)}.
///
/// Between consecutive half-integer crossings (k + 1/2)/|a_i| the nearest
/// lattice point p is fixed, and the qualifying theta form the intersection
/// of two open quadratic intervals. Sweeping the segments in order gives the
/// infimum up to floating-point root accuracy.
LcdResult lcd_1d(const std::vector<double>& a, const LcdParams& params);
LcdResult lcd_1d(const CoefficientMultiset& a, const LcdParams& params);

struct LcdMultidimOptions {
  unsigned angle_grid = 720;
  unsigned refine_rounds = 2;
  unsigned refine_candidates = 4;
};

/// d = 2 version, inf ||theta|| over theta in R^2. Along each ray theta = r u
/// the problem is one-dimensional in r with coefficients <u, a_i>; rays come
/// from an angle grid with local refinement, so the value is an upper bound
/// on the infimum. Throws ValidationError when the smallest eigenvalue of
/// sum a_i a_i^T is below 1.
LcdResult lcd_multidim(const CoefficientMultiset& a, const LcdParams& params, const LcdMultidimOptions& options = {});

/// Smallest eigenvalue of sum a_i a_i^T for 2-D entries.
double isotropy_floor(const CoefficientMultiset& a);

/// C beta / (gamma sqrt b) + C exp(-2 b alpha^2).
double rv_smallball_bound(double beta, double alpha, double gamma, double b, double c);

inline constexpr double kRvConstant = 2.0;

struct RvCheck {
  double lcd = 0;
  double b = 0;
  double bound = 0;
  /// Closed-interval radius used for the exact reference: beta * scale
  /// rounded up to a rational, so the reference can only overstate.
  Rational reference_radius;
  Rational exact_reference;
  bool sound = false;
};

/// Evaluates the bound for coefficients a / scale and pairs it with the exact
/// rho_{1,beta}(a / scale) = rho_{1,beta scale}(a). Throws ValidationError
/// naming the failed hypothesis (sum a_i^2 >= 1, b > 0, beta >= 1/LCD).
RvCheck rv_smallball_check(const CoefficientMultiset& a, double scale, double beta, const LcdParams& params,
                           const SignDistribution& xi, double c = kRvConstant);

inline constexpr double kRecurrenceConstant = 12.0;

struct RecurrenceMeasure {
  double estimate = 0;
  double lemma_bound = 0;
  double boundary_fraction = 0;
  bool resolution_warning = false;
  std::size_t cells = 0;
};

/// Grid measure of {theta in [-1, 1] : dist((z/beta) theta a, Z^n) <= t}
/// and the d = 1 bound C t beta / gamma.
RecurrenceMeasure recurrence_set_measure(const std::vector<double>& a, double t, double z, double beta, double gamma,
                                         double alpha, std::size_t cells = 200'000, double c = kRecurrenceConstant);

}  // namespace smallball
