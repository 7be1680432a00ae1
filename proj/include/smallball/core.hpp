#pragma once

#include <cstddef>
#include <vector>

#include "smallball/distribution.hpp"
#include "smallball/multiset.hpp"
#include "smallball/sign_distribution.hpp"

namespace smallball {

inline constexpr std::size_t kDefaultAtomBudget = 10'000'000;

/// Law of a_1 xi_1 + ... + a_n xi_n with independent xi_i ~ xi, by sequential
/// convolution. Throws BudgetError when an intermediate support could exceed
/// atom_budget atoms.
ExactDistribution exact_sign_sum_distribution(const CoefficientMultiset& a, const SignDistribution& xi,
                                              std::size_t atom_budget = kDefaultAtomBudget);
ExactDistribution2d exact_sign_sum_distribution_2d(const CoefficientMultiset& a,
                                                   const SignDistribution& xi,
                                                   std::size_t atom_budget = kDefaultAtomBudget);

struct Concentration {
  Rational rho;
  Rational argmax;  // smallest value attaining rho
};

Concentration concentration_probability(const CoefficientMultiset& a, const SignDistribution& xi,
                                        std::size_t atom_budget = kDefaultAtomBudget);
Concentration concentration_of(const ExactDistribution& dist);

/// Sum of the m largest binomial coefficients C(n, i).
BigInt largest_binomial_sum(unsigned n, unsigned long m);

struct Ball1d {
  Rational p;
  Rational witness;
};

/// Maximum mass of a closed interval [x - R, x + R].
Ball1d ball_probability_1d(const CoefficientMultiset& a, const SignDistribution& xi, const Rational& radius,
                           std::size_t atom_budget = kDefaultAtomBudget);
Ball1d ball_probability_1d(const ExactDistribution& dist, const Rational& radius);

struct Ball2dLimits {
  std::size_t max_entries = 22;
  std::size_t pair_budget = 50'000;
  std::size_t atom_budget = kDefaultAtomBudget;
};

struct Ball2d {
  Rational p;
  /// Exact when witness_exact; otherwise the nearest double of an irrational
  /// center, converted exactly.
  Point2 witness;
  bool witness_exact = true;
};

/// Maximum mass of a closed disk of radius R.
Ball2d ball_probability_2d(const CoefficientMultiset& a, const SignDistribution& xi, const Rational& radius,
                           const Ball2dLimits& limits = {});
Ball2d ball_probability_2d(const ExactDistribution2d& dist, const Rational& radius,
                           std::size_t pair_budget = Ball2dLimits{}.pair_budget);

/// Mass of the closed disk of radius R around a fixed center.
Rational disk_mass(const ExactDistribution2d& dist, const Point2& center, const Rational& radius);

struct FlatDirection {
  double normal_x = 1;
  double normal_y = 0;
  double angle = 0;
  Rational offset;
  std::size_t far_count = 0;
};

/// Grid search for a line H = {y : <y, e> = c} leaving the fewest entries at
/// distance >= 1. The result is an upper bound on the true minimum.
FlatDirection flat_direction_search(const CoefficientMultiset& a, unsigned angle_grid);

struct StanleyRow {
  unsigned n;
  Rational rho;
  double scaled;  // rho * n^{3/2}
};

/// Symmetric progression {-(n-1)/2, ..., (n-1)/2} for odd n.
CoefficientMultiset symmetric_progression(unsigned n);
std::vector<StanleyRow> stanley_constant_scan(const std::vector<unsigned>& n_list,
                                              std::size_t atom_budget = kDefaultAtomBudget);

}  // namespace smallball
