#pragma once

#include <string>
#include <vector>

#include "smallball/arith.hpp"

namespace smallball {

enum class SignKind { bernoulli_pm1, boolean_01, lazy, general };

std::string to_string(SignKind kind);

struct SignAtom {
  Rational value;
  Rational prob;
};

/// Finite-support law of one random coefficient multiplier xi.
///
/// Atoms are stored sorted by value with strictly positive probabilities
/// summing to exactly one. The lazy law with parameter mu puts mass mu/2 on
/// each of -1 and +1 and 1 - mu on 0 (the 0 atom is dropped when mu = 1).
class SignDistribution {
 public:
  static SignDistribution bernoulli();
  static SignDistribution boolean();
  static SignDistribution lazy(const Rational& mu);
  static SignDistribution general(std::vector<SignAtom> atoms);

  /// Parses `bernoulli`, `boolean`, `lazy:<mu>`, or
  /// `general:v1@p1,v2@p2,...`.
  static SignDistribution parse(const std::string& text);

  SignKind kind() const { return kind_; }
  const std::vector<SignAtom>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  /// Only meaningful for the lazy kind.
  const Rational& mu() const { return mu_; }

  /// Least common denominator of the atom probabilities; each probability
  /// is weight(i) / denominator() with integer weights.
  const BigInt& denominator() const { return denominator_; }
  const std::vector<BigInt>& weights() const { return weights_; }

  /// Law of xi1 - xi2 for two independent copies, merged and sorted.
  std::vector<SignAtom> difference_law() const;

  /// 1 - sup_a P(xi in B(a,1)) over open unit-radius balls, exact.
  Rational ball_escape_mass() const;

  /// P(c1 <= |xi1 - xi2| <= c2) >= c3, the nondegeneracy condition used by
  /// the continuous inverse theorems.
  bool satisfies_spread_condition(const Rational& c1, const Rational& c2,
                                  const Rational& c3) const;

  std::string describe() const;

 private:
  SignDistribution(SignKind kind, std::vector<SignAtom> atoms, Rational mu);

  SignKind kind_;
  std::vector<SignAtom> atoms_;
  Rational mu_;
  BigInt denominator_;
  std::vector<BigInt> weights_;
};

}  // namespace smallball
