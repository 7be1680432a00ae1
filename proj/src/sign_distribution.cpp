#include "smallball/sign_distribution.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "smallball/errors.hpp"

namespace smallball {

std::string to_string(SignKind kind) {
  switch (kind) {
    case SignKind::bernoulli_pm1: return "bernoulli_pm1";
    case SignKind::boolean_01: return "boolean_01";
    case SignKind::lazy: return "lazy_mu";
    case SignKind::general: return "general";
  }
  return "unknown";
}

SignDistribution::SignDistribution(SignKind kind, std::vector<SignAtom> atoms, Rational mu)
    : kind_(kind), mu_(std::move(mu)) {
  if (atoms.empty()) throw ValidationError("sign distribution needs at least one atom");
  std::map<Rational, Rational> merged;
  for (auto& a : atoms) {
    if (a.prob < 0) throw ValidationError("sign distribution probabilities must be non-negative");
    merged[a.value] += a.prob;
  }
  Rational total = 0;
  for (auto& [v, p] : merged) {
    if (p == 0) continue;
    atoms_.push_back({v, p});
    total += p;
  }
  if (total != 1)
    throw ValidationError("sign distribution probabilities sum to " + to_string(total) +
                          ", expected exactly 1");
  denominator_ = 1;
  for (const auto& a : atoms_) denominator_ = lcm(denominator_, a.prob.get_den());
  for (const auto& a : atoms_) weights_.push_back(BigInt(a.prob.get_num() * (denominator_ / a.prob.get_den())));
}

SignDistribution SignDistribution::bernoulli() {
  return SignDistribution(SignKind::bernoulli_pm1, {{-1, Rational(1, 2)}, {1, Rational(1, 2)}}, 0);
}

SignDistribution SignDistribution::boolean() {
  return SignDistribution(SignKind::boolean_01, {{0, Rational(1, 2)}, {1, Rational(1, 2)}}, 0);
}

SignDistribution SignDistribution::lazy(const Rational& mu) {
  if (mu <= 0 || mu > 1) throw ValidationError("lazy parameter mu must lie in (0, 1]");
  Rational half = mu / 2;
  return SignDistribution(SignKind::lazy, {{-1, half}, {0, Rational(1 - mu)}, {1, half}}, mu);
}

SignDistribution SignDistribution::general(std::vector<SignAtom> atoms) {
  for (const auto& a : atoms)
    if (a.prob <= 0) throw ValidationError("general sign distribution needs positive probabilities");
  return SignDistribution(SignKind::general, std::move(atoms), 0);
}

SignDistribution SignDistribution::parse(const std::string& text) {
  if (text == "bernoulli" || text == "ber" || text == "pm1") return bernoulli();
  if (text == "boolean" || text == "bool" || text == "01") return boolean();
  if (text.rfind("lazy:", 0) == 0) return lazy(parse_rational(text.substr(5)));
  if (text.rfind("general:", 0) == 0) {
    std::vector<SignAtom> atoms;
    std::stringstream ss(text.substr(8));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto at = item.find('@');
      if (at == std::string::npos)
        throw ValidationError("general atom '" + item + "' must be value@probability");
      atoms.push_back({parse_rational(item.substr(0, at)), parse_rational(item.substr(at + 1))});
    }
    return general(std::move(atoms));
  }
  throw ValidationError("unknown sign distribution '" + text + "'");
}

std::vector<SignAtom> SignDistribution::difference_law() const {
  std::map<Rational, Rational> law;
  for (const auto& a : atoms_)
    for (const auto& b : atoms_) law[Rational(a.value - b.value)] += a.prob * b.prob;
  std::vector<SignAtom> out;
  for (auto& [v, p] : law) out.push_back({v, p});
  return out;
}

Rational SignDistribution::ball_escape_mass() const {
  // An open ball of radius 1 holds a run of atoms whose span is < 2.
  Rational best = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    Rational mass = 0;
    for (std::size_t j = i; j < atoms_.size() && atoms_[j].value - atoms_[i].value < 2; ++j)
      mass += atoms_[j].prob;
    best = std::max(best, mass);
  }
  return 1 - best;
}

bool SignDistribution::satisfies_spread_condition(const Rational& c1, const Rational& c2,
                                                  const Rational& c3) const {
  Rational mass = 0;
  for (const auto& d : difference_law()) {
    Rational m = abs(d.value);
    if (m >= c1 && m <= c2) mass += d.prob;
  }
  return mass >= c3;
}

std::string SignDistribution::describe() const {
  switch (kind_) {
    case SignKind::bernoulli_pm1: return "bernoulli";
    case SignKind::boolean_01: return "boolean";
    case SignKind::lazy: return "lazy:" + to_string(mu_);
    case SignKind::general: break;
  }
  std::string out = "general:";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += ",";
    out += to_string(atoms_[i].value) + "@" + to_string(atoms_[i].prob);
  }
  return out;
}

}  // namespace smallball
