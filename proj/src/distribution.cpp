#include "smallball/distribution.hpp"

#include <algorithm>

namespace smallball {

template <class Value>
Rational BasicDistribution<Value>::mass_at(const Value& v) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), v,
                             [](const Atom& a, const Value& x) { return a.value < x; });
  if (it == atoms_.end() || !(it->value == v)) return 0;
  Rational r(it->weight, denominator_);
  r.canonicalize();
  return r;
}

template <class Value>
std::string BasicDistribution<Value>::to_csv() const {
  std::string out = "value,numerator,denominator\n";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    Rational p = probability(i);
    out += to_string(atoms_[i].value) + "," + p.get_num().get_str() + "," + p.get_den().get_str() + "\n";
  }
  return out;
}

template <class Value>
nlohmann::json BasicDistribution<Value>::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    atoms.push_back({{"value", to_string(atoms_[i].value)}, {"probability", to_string(probability(i))}});
  int dim = std::is_same_v<Value, Point2> ? 2 : 1;
  return {{"n_source", n_source_}, {"dimension", dim}, {"atoms", atoms}};
}

template class BasicDistribution<Rational>;
template class BasicDistribution<Point2>;

}  // namespace smallball
