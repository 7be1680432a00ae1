#include <doctest.h>

#include <random>

#include "smallball/arith.hpp"
#include "smallball/errors.hpp"
#include "smallball/multiset.hpp"
#include "smallball/sign_distribution.hpp"

using namespace smallball;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/4") == ratio(3, 4));
  CHECK(parse_rational(" -6/8 ") == Rational(-3, 4));
  CHECK(parse_rational("17") == 17);
  CHECK(parse_rational("-2.75") == Rational(-11, 4));
  CHECK(parse_rational(".5") == ratio(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
  CHECK_THROWS_AS(parse_rational(""), ValidationError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ValidationError);
}

TEST_CASE("torus norm is 1-periodic and even on random rationals") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97);
  for (int i = 0; i < 500; ++i) {
    Rational x(num(rng), den(rng));
    x.canonicalize();
    CHECK(torus_norm(Rational(x + 1)) == torus_norm(x));
    CHECK(torus_norm(Rational(-x)) == torus_norm(x));
    CHECK(torus_norm(x) <= ratio(1, 2));
    CHECK(torus_norm(x) >= 0);
  }
  CHECK(torus_norm(ratio(7, 2)) == ratio(1, 2));
  CHECK(torus_norm(Rational(-1, 3)) == ratio(1, 3));
}

TEST_CASE("rounding helpers") {
  CHECK(floor(Rational(-1, 2)) == -1);
  CHECK(ceil(Rational(-1, 2)) == 0);
  CHECK(round_nearest(ratio(1, 2)) == 1);
  CHECK(round_nearest(Rational(-1, 2)) == 0);
  CHECK(round_nearest(Rational(-7, 3)) == -2);
}

TEST_CASE("sign distributions") {
  auto b = SignDistribution::bernoulli();
  CHECK(b.support_size() == 2);
  CHECK(b.ball_escape_mass() == ratio(1, 2));
  auto lazy = SignDistribution::lazy(ratio(1, 3));
  REQUIRE(lazy.support_size() == 3);
  CHECK(lazy.atoms()[1].prob == ratio(2, 3));
  CHECK(SignDistribution::lazy(1).support_size() == 2);
  CHECK_THROWS_AS(SignDistribution::lazy(0), ValidationError);
  CHECK_THROWS_AS(SignDistribution::parse("general:0@1/2,1@1/3"), ValidationError);
  auto g = SignDistribution::parse("general:0@1/4,1@1/4,3@1/2");
  CHECK(g.denominator() == 4);
  CHECK(g.weights()[2] == 2);
  CHECK(SignDistribution::parse(g.describe()).atoms().size() == 3);
  // Boolean law: an open unit ball holds both atoms 0 and 1.
  CHECK(SignDistribution::boolean().ball_escape_mass() == 0);

  // xi1 - xi2 for Bernoulli: -2, 0, 2 with 1/4, 1/2, 1/4.
  auto d = b.difference_law();
  REQUIRE(d.size() == 3);
  CHECK(d[1].prob == ratio(1, 2));
  CHECK(b.satisfies_spread_condition(1, 2, ratio(1, 2)));
  CHECK_FALSE(b.satisfies_spread_condition(1, 2, ratio(3, 5)));
}

TEST_CASE("coefficient multiset parsing and canonical order") {
  auto a = CoefficientMultiset::parse("3, 1/2 -2");
  CHECK(a.size() == 3);
  CHECK(a.scalar_entries()[0] == -2);
  CHECK(a == CoefficientMultiset::parse("-2,3,1/2"));
  CHECK_THROWS_AS(CoefficientMultiset::parse(""), ValidationError);
  CHECK_THROWS_AS(CoefficientMultiset::parse("1/2", 1, true), ValidationError);
  auto p = CoefficientMultiset::parse("1;0 0;1", 2, true);
  CHECK(p.dimension() == 2);
  CHECK_THROWS_AS(p.scalar_entries(), ValidationError);
  CHECK_THROWS_AS(CoefficientMultiset::parse("1,0", 2), ValidationError);
  auto r = p.rotated(ratio(3, 5), ratio(4, 5));
  CHECK(norm_squared(r.point_entries()[0]) == 1);
}
