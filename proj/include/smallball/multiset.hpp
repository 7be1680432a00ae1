#pragma once

#include <string>
#include <vector>

#include "smallball/arith.hpp"

namespace smallball {

/// The coefficient list a_1..a_n of a signed sum, in dimension 1 or 2.
/// Entries keep their multiplicity and are stored sorted.
class CoefficientMultiset {
 public:
  static CoefficientMultiset scalars(std::vector<Rational> entries, bool unit_norm_floor = false);
  static CoefficientMultiset points(std::vector<Point2> entries, bool unit_norm_floor = false);
  static CoefficientMultiset integers(const std::vector<long long>& entries);

  /// Comma or whitespace separated rational literals. In dimension 2 each
  /// entry is written `x;y`.
  static CoefficientMultiset parse(const std::string& text, int dimension = 1,
                                   bool unit_norm_floor = false);

  int dimension() const { return dimension_; }
  std::size_t size() const { return dimension_ == 1 ? scalars_.size() : points_.size(); }
  bool unit_norm_floor() const { return unit_norm_floor_; }

  /// Valid only in dimension 1 / 2 respectively; throws ValidationError otherwise.
  const std::vector<Rational>& scalar_entries() const;
  const std::vector<Point2>& point_entries() const;

  bool all_integer() const;
  /// Entries as 64-bit integers; throws ValidationError if any entry is
  /// fractional or does not fit.
  std::vector<long long> integer_entries() const;

  CoefficientMultiset scaled(const Rational& c) const;
  CoefficientMultiset rotated(const Rational& c, const Rational& s) const;

  std::string to_text() const;

  friend bool operator==(const CoefficientMultiset& a, const CoefficientMultiset& b) {
    return a.dimension_ == b.dimension_ && a.scalars_ == b.scalars_ && a.points_ == b.points_;
  }

 private:
  CoefficientMultiset() = default;
  void check();

  int dimension_ = 1;
  bool unit_norm_floor_ = false;
  std::vector<Rational> scalars_;
  std::vector<Point2> points_;
};

}  // namespace smallball
