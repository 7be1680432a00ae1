#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "smallball/errors.hpp"
#include "smallball/parallel.hpp"
#include "smallball/polyforms.hpp"

namespace smallball {

MultilinearPolynomial::MultilinearPolynomial(std::size_t n,
                                             const std::vector<std::pair<std::vector<unsigned>, Rational>>& terms)
    : n_(n) {
  for (const auto& [set, coef] : terms) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i] >= n) throw ValidationError("term index " + std::to_string(set[i] + 1) + " exceeds n");
      if (i && set[i] <= set[i - 1]) throw ValidationError("term indices must be strictly increasing");
    }
    terms_[set] += coef;
  }
  for (auto it = terms_.begin(); it != terms_.end();) it = it->second == 0 ? terms_.erase(it) : std::next(it);
}

MultilinearPolynomial MultilinearPolynomial::parse(const std::string& text, std::size_t n) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), '\n', ';');
  std::stringstream ls(normalized);
  std::string line;
  std::vector<std::pair<std::vector<unsigned>, Rational>> terms;
  std::size_t largest = 0;
  while (std::getline(ls, line, ';')) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ValidationError("term '" + line + "' lacks 'coef:'");
    std::string coef = line.substr(0, colon);
    coef.erase(std::remove_if(coef.begin(), coef.end(), ::isspace), coef.end());
    std::vector<unsigned> set;
    std::stringstream is(line.substr(colon + 1));
    std::string tok;
    while (is >> tok) {
      long idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ValidationError("bad index '" + tok + "'");
      }
      if (idx < 1) throw ValidationError("term indices are 1-based");
      set.push_back(static_cast<unsigned>(idx - 1));
      largest = std::max<std::size_t>(largest, static_cast<std::size_t>(idx));
    }
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
      throw ValidationError("repeated index in term '" + line + "' (xi^2 = xi is not applied implicitly)");
    terms.emplace_back(std::move(set), parse_rational(coef));
  }
  if (n == 0) n = largest;
  if (n < largest) throw ValidationError("n is smaller than the largest index used");
  return MultilinearPolynomial(n, terms);
}

std::size_t MultilinearPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [s, c] : terms_) d = std::max(d, s.size());
  return d;
}

std::string MultilinearPolynomial::to_text() const {
  std::string out;
  for (const auto& [s, c] : terms_) {
    if (!out.empty()) out += "; ";
    out += to_string(c) + ":";
    for (unsigned i : s) out += " " + std::to_string(i + 1);
  }
  return out;
}

Rational MultilinearPolynomial::evaluate(std::uint64_t mask) const {
  Rational v = 0;
  for (const auto& [s, c] : terms_) {
    bool on = true;
    for (unsigned i : s) on &= (mask >> i & 1) != 0;
    if (on) v += c;
  }
  return v;
}

namespace {

struct IntTerm {
  std::uint32_t mask;
  long long coef;
};

struct Scaled {
  std::vector<IntTerm> terms;
  BigInt scale = 1;
};

Scaled scale_terms(const MultilinearPolynomial& p) {
  Scaled s;
  for (const auto& [set, c] : p.terms()) s.scale = lcm(s.scale, c.get_den());
  long double reach = 0;
  for (const auto& [set, c] : p.terms()) {
    const BigInt v = c.get_num() * (s.scale / c.get_den());
    if (!v.fits_slong_p()) throw BudgetError("scaled coefficient exceeds 64 bits");
    std::uint32_t mask = 0;
    for (unsigned i : set) mask |= 1u << i;
    s.terms.push_back({mask, v.get_si()});
    reach += std::abs(static_cast<long double>(v.get_si()));
  }
  if (reach > 4e18L) throw BudgetError("polynomial values would overflow 64 bits");
  return s;
}

std::optional<long long> scaled_target(const Rational& x, const BigInt& scale) {
  const Rational t = x * scale;
  if (t.get_den() != 1 || !t.get_num().fits_slong_p()) return std::nullopt;
  return t.get_num().get_si();
}

// Number of masks in {0,1}^n whose value equals target[parity(mask)]. The top
// bits pick a chunk; inside a chunk a Gray code flips one low bit per step and
// only terms through that bit are touched.
std::uint64_t count_matches(const Scaled& s, std::size_t n, const std::optional<long long> target[2],
                            unsigned workers) {
  const std::size_t high = n > 10 ? std::min<std::size_t>(6, n - 10) : 0;
  const std::size_t low = n - high;
  std::vector<std::vector<IntTerm>> through(n);
  for (const auto& t : s.terms)
    for (std::size_t i = 0; i < n; ++i)
      if (t.mask >> i & 1) through[i].push_back(t);
  std::vector<std::uint64_t> partial(std::size_t{1} << high, 0);
  for_each_chunk(partial.size(), 1, workers, [&](std::uint64_t c, std::uint64_t, std::uint64_t) {
    std::uint32_t mask = static_cast<std::uint32_t>(c << low);
    long long value = 0;
    for (const auto& t : s.terms)
      if ((mask & t.mask) == t.mask) value += t.coef;
    std::uint64_t hits = 0;
    const std::uint64_t steps = std::uint64_t{1} << low;
    for (std::uint64_t g = 0;; ++g) {
      const auto& want = target[__builtin_popcount(mask) & 1];
      if (want && value == *want) ++hits;
      if (g + 1 == steps) break;
      const unsigned bit = static_cast<unsigned>(__builtin_ctzll(g + 1));
      const std::uint32_t flip = 1u << bit;
      if (mask & flip) {
        for (const auto& t : through[bit])
          if ((mask & t.mask) == t.mask) value -= t.coef;
        mask ^= flip;
      } else {
        mask ^= flip;
        for (const auto& t : through[bit])
          if ((mask & t.mask) == t.mask) value += t.coef;
      }
    }
    partial[c] = hits;
  });
  std::uint64_t total = 0;
  for (auto h : partial) total += h;
  return total;
}

bool is_uniform_boolean(const SignDistribution& xi) {
  const auto& a = xi.atoms();
  return a.size() == 2 && a[0].value == 0 && a[1].value == 1 && a[0].prob == a[1].prob;
}

}  // namespace

MultilinearResult multilinear_concentration(const MultilinearPolynomial& p, const SignDistribution& xi,
                                            const Rational& x, unsigned workers, double c) {
  if (!is_uniform_boolean(xi))
    throw ValidationError("multilinear concentration is stated for the uniform {0,1} law, got " + xi.describe());
  const std::size_t n = p.n();
  if (n > kMultilinearLimit) throw BudgetError("multilinear enumeration is limited to n <= 22");
  const Scaled s = scale_terms(p);
  const auto t = scaled_target(x, s.scale);
  const std::optional<long long> target[2] = {t, t};

  MultilinearResult out;
  out.prob = ratio(BigInt(static_cast<unsigned long>(count_matches(s, n, target, workers))), BigInt(1) << n);
  out.k = p.degree();
  std::uint64_t used = 0;
  for (const auto& [set, coef] : p.terms()) {
    if (set.size() != out.k || out.k == 0) continue;
    std::uint64_t m = 0;
    for (unsigned i : set) m |= std::uint64_t{1} << i;
    if (m & used) continue;
    used |= m;
    out.family.push_back(set);
  }
  out.r = out.family.size();
  if (out.k > 0) {
    const double k = static_cast<double>(out.k);
    out.b_k = 1.0 / (2 * k * std::pow(2.0, k));
    out.weak_exponent = std::pow(2.0, -(k * k + k) / 2);
  }
  const double r = static_cast<double>(std::max<std::size_t>(out.r, 1));
  out.bound = c * std::pow(r, -out.b_k);
  out.weak_bound = c * std::pow(r, -out.weak_exponent);
  out.sound = out.prob.get_d() <= out.bound;
  return out;
}

Rational parity_correlation(const MultilinearPolynomial& p, unsigned workers) {
  const std::size_t n = p.n();
  if (n > kMultilinearLimit) throw BudgetError("parity correlation is limited to n <= 22");
  const Scaled s = scale_terms(p);
  const std::optional<long long> target[2] = {scaled_target(0, s.scale), scaled_target(1, s.scale)};
  const std::uint64_t agree = count_matches(s, n, target, workers);
  return ratio(BigInt(static_cast<unsigned long>(agree)), BigInt(1) << n) - ratio(1, 2);
}

}  // namespace smallball
