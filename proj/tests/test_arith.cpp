#include "doctest.h"
#include "latt/arith.hpp"

using namespace latt;

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(to_string(parse_rational("10/4")) == "5/2");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("x"), InputError);
}

TEST_CASE("floor, frac and mod follow the mathematical convention") {
  CHECK(floor(Rational(-1, 3)) == -1);
  CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
  CHECK(round_nearest(Rational(5, 2)) == 3);
  CHECK(floor_div(Integer(-7), Integer(2)) == -4);
  CHECK(mod(Rational(7, 2), Rational(1)) == Rational(1, 2));
}

TEST_CASE("determinant and inverse") {
  RatMatrix a{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
  CHECK(determinant(a) == 4);
  RatMatrix prod = a * inverse(a);
  CHECK(prod == RatMatrix::identity(3));
  IntMatrix ai = to_integer(a);
  CHECK(determinant(ai) == 4);
  CHECK(is_positive_definite(a));
  RatMatrix b{{1, 2}, {2, 1}};
  CHECK_FALSE(is_positive_definite(b));
  CHECK(rank(RatMatrix{{1, 2}, {2, 4}}) == 1);
}

TEST_CASE("solve_row finds x with x*m = v") {
  RatMatrix m{{1, 1, 0}, {0, 1, 1}};
  RatVector x;
  REQUIRE(solve_row(m, RatVector{2, 5, 3}, x));
  CHECK(x == RatVector{2, 3});
  CHECK_FALSE(solve_row(m, RatVector{1, 0, 0}, x));
}

TEST_CASE("int64 conversion guards overflow") {
  Integer big = Integer(1) << 70;
  CHECK_FALSE(fits_int64(big));
  CHECK_THROWS_AS(to_int64(big), InputError);
  CHECK(to_int64(Integer(-5)) == -5);
}
