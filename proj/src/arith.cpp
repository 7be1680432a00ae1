#include "smallball/arith.hpp"

#include <cctype>
#include <cmath>

#include "smallball/errors.hpp"

namespace smallball {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (!is_integer_literal(s))
    throw ValidationError("malformed rational literal '" + std::string(whole) + "'");
  if (s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ValidationError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(trim(s.substr(0, slash)), s);
    BigInt den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(s) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if (int_part.empty() && frac_part.empty())
      throw ValidationError("malformed rational literal '" + std::string(s) + "'");
    for (char c : frac_part)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ValidationError("malformed rational literal '" + std::string(s) + "'");
    BigInt whole = int_part.empty() ? BigInt(0) : parse_integer(int_part, s);
    BigInt frac = frac_part.empty() ? BigInt(0) : BigInt(std::string(frac_part), 10);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    Rational r(whole * scale + frac, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }

  return Rational(parse_integer(s, s));
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value has no rational form");
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

BigInt floor(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt round_nearest(const Rational& r) { return floor(Rational(r + Rational(1, 2))); }

Rational torus_norm(const Rational& x) {
  Rational frac = x - Rational(floor(x));
  Rational other = Rational(1) - frac;
  return frac < other ? frac : other;
}

double torus_norm(double x) { return std::abs(x - std::nearbyint(x)); }

BigInt binomial(unsigned n, unsigned k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Rational dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

Rational norm_squared(const Point2& p) { return dot(p, p); }

std::string to_string(const Point2& p) { return to_string(p.x) + ";" + to_string(p.y); }

Point2 rotate(const Point2& p, const Rational& c, const Rational& s) {
  return {Rational(c * p.x - s * p.y), Rational(s * p.x + c * p.y)};
}

}  // namespace smallball
