#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "smallball/arith.hpp"

namespace smallball {

/// Exact law of a signed sum. Every atom carries an integer weight; the
/// probability of an atom is weight / denominator. Atoms are sorted by value,
/// values are distinct, and the weights sum to the denominator.
template <class Value>
class BasicDistribution {
 public:
  struct Atom {
    Value value;
    BigInt weight;
  };

  BasicDistribution() = default;
  BasicDistribution(std::vector<Atom> atoms, BigInt denominator, std::size_t n_source)
      : atoms_(std::move(atoms)), denominator_(std::move(denominator)), n_source_(n_source) {}

  const std::vector<Atom>& atoms() const { return atoms_; }
  const BigInt& denominator() const { return denominator_; }
  std::size_t n_source() const { return n_source_; }
  std::size_t support_size() const { return atoms_.size(); }

  Rational probability(std::size_t i) const {
    Rational r(atoms_[i].weight, denominator_);
    r.canonicalize();
    return r;
  }

  /// Probability of an exact value; zero when the value is not an atom.
  Rational mass_at(const Value& v) const;

  Rational total() const {
    BigInt s = 0;
    for (const auto& a : atoms_) s += a.weight;
    Rational r(s, denominator_);
    r.canonicalize();
    return r;
  }

  /// Rows `value,numerator,denominator` with the probability in lowest terms.
  std::string to_csv() const;
  nlohmann::json to_json() const;

 private:
  std::vector<Atom> atoms_;
  BigInt denominator_ = 1;
  std::size_t n_source_ = 0;
};

using ExactDistribution = BasicDistribution<Rational>;
using ExactDistribution2d = BasicDistribution<Point2>;

extern template class BasicDistribution<Rational>;
extern template class BasicDistribution<Point2>;

}  // namespace smallball
