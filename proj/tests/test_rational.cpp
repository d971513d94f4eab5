#include <doctest.h>

#include "qhelly/rational.hpp"

using namespace qhelly;

TEST_CASE("parse and print rationals") {
  CHECK(to_string(parse_rational("1/9216")) == "1/9216");
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("3")) == "3/1");
  CHECK(to_string(parse_rational("0")) == "0/1");
  CHECK(to_string(parse_rational("-0.25")) == "-1/4");
  CHECK(to_string(parse_rational(" 0.5 ")) == "1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("1/-2"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK_THROWS_AS(parse_rational("1."), InputError);
}

TEST_CASE("ratio is in lowest terms") {
  const Rational r = ratio(6, 15);
  CHECK(r == Rational(2, 5));
  CHECK(r.get_den() == 5);
  CHECK_THROWS_AS(ratio(1, 0), InputError);
}

TEST_CASE("binomial against Pascal's rule") {
  for (int n = 0; n <= 30; ++n) {
    CHECK(binomial(n, 0) == 1);
    CHECK(binomial(n, n) == 1);
    for (int k = 1; k < n; ++k) CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
  }
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(3, -1) == 0);
  CHECK(binomial(-2, 1) == 0);
  CHECK(binomial(100, 50) == Integer("100891344545564193334812497256"));
}

TEST_CASE("floor, ceil and powers") {
  CHECK(floor_to_int(Rational(7, 2)) == 3);
  CHECK(floor_to_int(Rational(-7, 2)) == -4);
  CHECK(ceil_to_int(Rational(7, 2)) == 4);
  CHECK(ceil_to_int(Rational(-7, 2)) == -3);
  CHECK(floor_to_int(Rational(4)) == 4);
  CHECK(ceil_to_int(Rational(4)) == 4);
  CHECK(pow(Rational(1, 96), 2) == Rational(1, 9216));
  CHECK(pow(Rational(3), 0) == 1);
  CHECK(ipow(Rational(1, 2), -3) == 8);
  CHECK(ipow(Rational(2, 3), 2) == Rational(4, 9));
  CHECK_THROWS(ipow(Rational(0), -1));
}
