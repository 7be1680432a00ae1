#include "smallball/multiset.hpp"

#include <algorithm>
#include <climits>

#include "smallball/errors.hpp"

namespace smallball {

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

void CoefficientMultiset::check() {
  if (size() == 0) throw ValidationError("coefficient multiset must have n >= 1 entries");
  std::sort(scalars_.begin(), scalars_.end());
  std::sort(points_.begin(), points_.end());
  if (!unit_norm_floor_) return;
  for (const auto& a : scalars_)
    if (abs(a) < 1) throw ValidationError("unit_norm_floor violated by entry " + to_string(a));
  for (const auto& p : points_)
    if (norm_squared(p) < 1) throw ValidationError("unit_norm_floor violated by entry " + to_string(p));
}

CoefficientMultiset CoefficientMultiset::scalars(std::vector<Rational> entries, bool unit_norm_floor) {
  CoefficientMultiset m;
  m.dimension_ = 1;
  m.unit_norm_floor_ = unit_norm_floor;
  m.scalars_ = std::move(entries);
  m.check();
  return m;
}

CoefficientMultiset CoefficientMultiset::points(std::vector<Point2> entries, bool unit_norm_floor) {
  CoefficientMultiset m;
  m.dimension_ = 2;
  m.unit_norm_floor_ = unit_norm_floor;
  m.points_ = std::move(entries);
  m.check();
  return m;
}

CoefficientMultiset CoefficientMultiset::integers(const std::vector<long long>& entries) {
  std::vector<Rational> v;
  v.reserve(entries.size());
  for (long long e : entries) v.emplace_back(BigInt(static_cast<long>(e)));
  return scalars(std::move(v));
}

CoefficientMultiset CoefficientMultiset::parse(const std::string& text, int dimension,
                                               bool unit_norm_floor) {
  if (dimension != 1 && dimension != 2) throw ValidationError("dimension must be 1 or 2");
  auto tokens = split_tokens(text);
  if (tokens.empty()) throw ValidationError("coefficient multiset must have n >= 1 entries");
  if (dimension == 1) {
    std::vector<Rational> v;
    for (const auto& t : tokens) v.push_back(parse_rational(t));
    return scalars(std::move(v), unit_norm_floor);
  }
  std::vector<Point2> v;
  for (const auto& t : tokens) {
    auto semi = t.find(';');
    if (semi == std::string::npos)
      throw ValidationError("2-D entry '" + t + "' must be written x;y");
    v.emplace_back(parse_rational(t.substr(0, semi)), parse_rational(t.substr(semi + 1)));
  }
  return points(std::move(v), unit_norm_floor);
}

const std::vector<Rational>& CoefficientMultiset::scalar_entries() const {
  if (dimension_ != 1) throw ValidationError("operation requires a 1-D multiset (d = 1)");
  return scalars_;
}

const std::vector<Point2>& CoefficientMultiset::point_entries() const {
  if (dimension_ != 2) throw ValidationError("operation requires a 2-D multiset (d = 2)");
  return points_;
}

bool CoefficientMultiset::all_integer() const {
  for (const auto& a : scalars_)
    if (a.get_den() != 1) return false;
  for (const auto& p : points_)
    if (p.x.get_den() != 1 || p.y.get_den() != 1) return false;
  return true;
}

std::vector<long long> CoefficientMultiset::integer_entries() const {
  std::vector<long long> out;
  for (const auto& a : scalar_entries()) {
    if (a.get_den() != 1) throw ValidationError("entry " + to_string(a) + " is not an integer");
    if (!a.get_num().fits_slong_p()) throw ValidationError("entry " + to_string(a) + " exceeds 64 bits");
    out.push_back(a.get_num().get_si());
  }
  return out;
}

CoefficientMultiset CoefficientMultiset::scaled(const Rational& c) const {
  if (dimension_ == 1) {
    std::vector<Rational> v;
    for (const auto& a : scalars_) v.emplace_back(c * a);
    return scalars(std::move(v));
  }
  std::vector<Point2> v;
  for (const auto& p : points_) v.push_back(c * p);
  return points(std::move(v));
}

CoefficientMultiset CoefficientMultiset::rotated(const Rational& c, const Rational& s) const {
  if (c * c + s * s != 1) throw ValidationError("rotation pair must satisfy c^2 + s^2 = 1");
  std::vector<Point2> v;
  for (const auto& p : point_entries()) v.push_back(rotate(p, c, s));
  return points(std::move(v), unit_norm_floor_);
}

std::string CoefficientMultiset::to_text() const {
  std::string out;
  if (dimension_ == 1) {
    for (std::size_t i = 0; i < scalars_.size(); ++i) out += (i ? "," : "") + to_string(scalars_[i]);
  } else {
    for (std::size_t i = 0; i < points_.size(); ++i) out += (i ? "," : "") + to_string(points_[i]);
  }
  return out;
}

}  // namespace smallball
