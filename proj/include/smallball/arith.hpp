#pragma once

// Exact arithmetic vocabulary shared by every module: GMP-backed rationals
// and big integers, rational points in the plane, and the torus norm.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smallball {

using BigInt = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms (the raw gmpxx constructor does not reduce).
inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses `p/q`, an integer, or a finite decimal such as `-2.75`.
/// Throws ValidationError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: `p/q` in lowest terms, or `p` when q = 1.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

/// Builds a rational from a double exactly (every finite double is dyadic).
Rational rational_from_double(double x);

Rational abs(const Rational& r);
BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);
/// Nearest integer; ties round toward +infinity.
BigInt round_nearest(const Rational& r);

/// Distance from x to the nearest integer, computed exactly.
Rational torus_norm(const Rational& x);
double torus_norm(double x);

BigInt binomial(unsigned n, unsigned k);
BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);

struct Point2 {
  Rational x;
  Rational y;

  Point2() = default;
  Point2(Rational px, Rational py) : x(std::move(px)), y(std::move(py)) {}

  friend bool operator==(const Point2& a, const Point2& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const Point2& a, const Point2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
  friend Point2 operator+(const Point2& a, const Point2& b) {
    return {Rational(a.x + b.x), Rational(a.y + b.y)};
  }
  friend Point2 operator-(const Point2& a, const Point2& b) {
    return {Rational(a.x - b.x), Rational(a.y - b.y)};
  }
  friend Point2 operator*(const Rational& s, const Point2& p) {
    return {Rational(s * p.x), Rational(s * p.y)};
  }
};

Rational dot(const Point2& a, const Point2& b);
Rational norm_squared(const Point2& p);
std::string to_string(const Point2& p);

/// Exact rotation by the rational cosine/sine pair (c, s) with c^2 + s^2 = 1.
Point2 rotate(const Point2& p, const Rational& c, const Rational& s);

}  // namespace smallball
