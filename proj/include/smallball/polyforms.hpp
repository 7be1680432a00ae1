#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smallball/gap.hpp"

namespace smallball {

inline constexpr std::size_t kQuadraticLimit = 24;

class SymmetricCoefficientMatrix {
 public:
  /// Row-major n x n entries; throws ValidationError unless a_ij = a_ji.
  SymmetricCoefficientMatrix(std::size_t n, std::vector<Rational> entries);

  /// Rows separated by ';' or newlines, entries by ',' or whitespace.
  static SymmetricCoefficientMatrix parse(const std::string& text);
  static SymmetricCoefficientMatrix all_ones(std::size_t n);
  static SymmetricCoefficientMatrix identity(std::size_t n);
  /// Independent uniform +-1 entries on and above the diagonal.
  static SymmetricCoefficientMatrix random_pm1(std::size_t n, std::uint64_t seed);

  std::size_t n() const { return n_; }
  const Rational& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<Rational>& entries() const { return entries_; }
  SymmetricCoefficientMatrix permuted(const std::vector<std::size_t>& perm) const;
  SymmetricCoefficientMatrix scaled(const Rational& c) const;
  std::string to_text() const;

 private:
  std::size_t n_;
  std::vector<Rational> entries_;
};

struct QuadraticConcentration {
  Rational rho;
  Rational argmax;  // smallest value attaining rho
  std::size_t distinct_values = 0;
};

/// sup_a P(sum_{i,j} a_ij xi_i xi_j = a) by enumerating every outcome vector.
QuadraticConcentration quadratic_concentration(const SymmetricCoefficientMatrix& m, const SignDistribution& xi,
                                               unsigned workers = 1, std::uint64_t budget = 1ULL << 26);

struct DecouplingResult {
  Rational lhs;    // P(Q(Y, Z) = x)
  Rational joint;  // P(Q(Y,Z) = Q(Y',Z) = Q(Y,Z') = Q(Y',Z') = x)
  double rhs = 0;  // joint^{1/4}
  bool holds = false;  // lhs^4 <= joint, decided exactly
};

/// +-1 signs; `first` lists the indices of U_1 (0-based), the rest form U_2.
DecouplingResult decoupling_check(const SymmetricCoefficientMatrix& m, const std::vector<std::size_t>& first,
                                  const Rational& x);

enum class QuadKind { gap, lowrank, mixed };

struct QuadGenParams {
  QuadKind kind = QuadKind::gap;
  std::size_t n = 10;
  /// Entry pool for the gap part; integer generators.
  Gap pool = make_gap({Rational(1)}, {3});
  /// Low-rank part a_ij += k_i b_j + k_j b_i. Empty k means alternating +-1;
  /// empty b means uniform integers in [-b_range, b_range].
  std::vector<long long> k;
  std::vector<long long> b;
  long long b_range = 3;
};

struct QuadGenResult {
  SymmetricCoefficientMatrix matrix;
  Rational rho_q;
  Rational predicted_floor;
  double floor_exponent = 0;  // c with floor = n^{-c}
};

/// The floor is P(sum k_i xi_i = 0) / |n^2 Q| (either factor is 1 when its
/// part is absent): on that event the form lands in the dilate n^2 Q.
QuadGenResult structured_quadratic_generator(const QuadGenParams& params, std::uint64_t seed, unsigned workers = 1);

QuadKind parse_quad_kind(const std::string& text);

class MultilinearPolynomial {
 public:
  MultilinearPolynomial() = default;
  /// Terms keyed by strictly increasing 0-based index sets; zero
  /// coefficients are dropped, repeated sets are summed.
  MultilinearPolynomial(std::size_t n, const std::vector<std::pair<std::vector<unsigned>, Rational>>& terms);

  /// One term per line or ';': "coef: i1 i2 ... ik" with 1-based indices; an
  /// empty index list is the constant term. n defaults to the largest index.
  static MultilinearPolynomial parse(const std::string& text, std::size_t n = 0);

  std::size_t n() const { return n_; }
  std::size_t degree() const;
  const std::map<std::vector<unsigned>, Rational>& terms() const { return terms_; }
  std::string to_text() const;
  Rational evaluate(std::uint64_t mask) const;

 private:
  std::size_t n_ = 0;
  std::map<std::vector<unsigned>, Rational> terms_;
};

inline constexpr std::size_t kMultilinearLimit = 22;
inline constexpr double kMultilinearConstant = 1.0;

struct MultilinearResult {
  Rational prob;
  std::size_t r = 0;  // greedy maximal disjoint family of top-degree terms
  std::size_t k = 0;
  double b_k = 0;           // 1 / (2k 2^k)
  double bound = 0;         // C r^{-b_k}
  double weak_exponent = 0; // 2^{-(k^2+k)/2}, for comparison
  double weak_bound = 0;    // C r^{-weak_exponent}
  bool sound = false;       // prob <= bound
  std::vector<std::vector<unsigned>> family;
};

MultilinearResult multilinear_concentration(const MultilinearPolynomial& p, const SignDistribution& xi,
                                            const Rational& x, unsigned workers = 1,
                                            double c = kMultilinearConstant);

/// P(p(xi) = parity(xi)) - 1/2 over uniform {0,1}^n, exactly.
Rational parity_correlation(const MultilinearPolynomial& p, unsigned workers = 1);

}  // namespace smallball
