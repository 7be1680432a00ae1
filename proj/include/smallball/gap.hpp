#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smallball/core.hpp"

namespace smallball {

/// Q = { g0 + sum m_i g_i : |m_i| <= M_i }. Symmetric when g0 = 0.
struct Gap {
  std::vector<Rational> generators;
  std::vector<long long> bounds;
  Rational offset;

  std::size_t rank() const { return generators.size(); }
  bool symmetric() const { return offset == 0; }
  /// prod (2 M_i + 1), without materializing.
  BigInt volume() const;
  std::string describe() const;
};

Gap make_gap(std::vector<Rational> generators, std::vector<long long> bounds, Rational offset = 0);

struct GapPoints {
  std::vector<Rational> points;  // sorted, distinct
  bool proper = false;
};

inline constexpr std::uint64_t kDefaultGapBudget = 2'000'000;

/// Throws BudgetError when the volume exceeds budget.
GapPoints gap_materialize(const Gap& q, std::uint64_t budget = kDefaultGapBudget);

struct ProperCheck {
  bool proper = false;
  /// Nonzero m with |m_i| <= 2 M_i and sum m_i g_i = 0, when improper.
  std::vector<long long> collision;
  std::string method;  // "materialize" or "collision-search"
};

/// Materializes when the volume fits in budget, else searches for a collision
/// vector by solving for the coordinate with the widest range. Throws
/// BudgetError if neither route fits.
ProperCheck gap_is_proper(const Gap& q, std::uint64_t budget = kDefaultGapBudget);

/// The collision route alone; budget caps the enumerated difference vectors.
ProperCheck gap_collision_search(const Gap& q, std::uint64_t budget = kDefaultGapBudget);

/// A box vector representing x, if any.
std::optional<std::vector<long long>> gap_contains(const Gap& q, const Rational& x,
                                                   std::uint64_t budget = kDefaultGapBudget);

Gap gap_dilate(const Gap& q, long long t);

struct ForwardSample {
  CoefficientMultiset a;
  Rational rho;
  double quality = 0;  // rho * n^{r/2} * |Q|
};

/// n entries drawn uniformly (with replacement) from the points of a proper Q.
ForwardSample gap_forward_sample(const Gap& q, std::size_t n, std::uint64_t seed,
                                 std::uint64_t budget = kDefaultGapBudget);

struct GapFitCertificate {
  Gap gap;
  std::size_t covered = 0;
  std::vector<std::size_t> covered_indices;  // positions in the sorted entry list
  Rational epsilon_achieved;
  Rational rho;
  double quality = 0;  // rho * |Q| * n^{r/2}
  bool fallback = false;
  bool search_truncated = false;
  std::size_t candidates_tried = 0;
};

struct GapFitOptions {
  unsigned max_rank = 2;
  /// Cap on candidate generator tuples evaluated across all ranks.
  std::uint64_t budget = 2'000'000;
  std::size_t rank3_seeds = 6;
};

/// Searches symmetric proper GAPs containing all but floor(epsilon n) entries
/// and returns the smallest one found; the rank-1 gcd cover is the fallback.
GapFitCertificate gap_fit(const CoefficientMultiset& a, const Rational& epsilon, const GapFitOptions& options = {});

struct CensusRow {
  Rational rho0;
  std::uint64_t count = 0;
  double bound_shape = 0;  // (rho0^{-1} n^{-1/2})^n
};

struct CensusResult {
  std::uint64_t total = 0;  // number of multisets enumerated
  std::vector<CensusRow> rows;
};

/// Counts sorted multisets of n nonzero integers in [-M, M] with rho >= rho0,
/// for each rho0 in the grid.
CensusResult structured_multiset_census(unsigned n, unsigned m, const std::vector<Rational>& rho_grid,
                                        unsigned workers = 1, std::uint64_t budget = 5'000'000);

/// Either a rational x, or a root of x^2 = b x + c with b^2 + 4c not a square.
struct AlgebraicSpec {
  bool quadratic = false;
  Rational x;
  long long b = 0;
  long long c = 0;

  /// "<rational>", "golden", "quadratic:b,c" or "poly:1,c1,...,cd" (monic,
  /// leading coefficient first). Degrees above 2 are rejected.
  static AlgebraicSpec parse(const std::string& text);
  std::string describe() const;
};

/// rho of sum_{j=0..n} eps_j x^j, with values compared exactly in Q or Z[x].
Rational geometric_progression_rho(const AlgebraicSpec& x, unsigned n,
                                   std::size_t atom_budget = kDefaultAtomBudget);

}  // namespace smallball
