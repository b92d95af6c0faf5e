#include <doctest.h>

#include "vinolab/errors.hpp"
#include "vinolab/numeric.hpp"

using namespace vinolab;

TEST_CASE("rational parsing") {
  CHECK(parse_rat("1/10") == Rat(1, 10));
  CHECK(parse_rat("7") == Rat(7));
  CHECK(parse_rat("-3/6") == Rat(-1, 2));
  CHECK_THROWS_AS(parse_rat("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_rat("1/-2"), ConfigError);
  CHECK_THROWS_AS(parse_rat("x"), ConfigError);
  CHECK_THROWS_AS(parse_int("12.5"), ConfigError);
  // serialization reduces even when the caller skipped canonicalize()
  CHECK(to_decimal(Rat(6, 4)) == "3/2");
  CHECK(to_decimal(Rat(8, 2)) == "4");
}

TEST_CASE("integer and rational powers") {
  CHECK(int_pow(Int(3), 0) == 1);
  CHECK(int_pow(Int(-2), 5) == -32);
  CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
  CHECK(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
  CHECK(rat_pow(Rat(5), 0) == Rat(1));
}

TEST_CASE("power comparisons decide exactly") {
  // integer exponent sanity
  CHECK(compare_power(Rat(8), Rat(1), Rat(2), Rat(3)) == 0);
  CHECK(compare_power(Rat(9), Rat(1), Rat(2), Rat(3)) > 0);
  CHECK(compare_power(Rat(7), Rat(1), Rat(2), Rat(3)) < 0);

  // fractional exponents: 2^{7/2} sits between 11 and 12
  CHECK(compare_power(Rat(11), Rat(1), Rat(2), Rat(7, 2)) < 0);
  CHECK(compare_power(Rat(12), Rat(1), Rat(2), Rat(7, 2)) > 0);

  // exact equality through a fractional exponent: 32 = 4^{5/2}
  CHECK(compare_power(Rat(32), Rat(1), Rat(4), Rat(5, 2)) == 0);
  CHECK(compare_power(Rat(32), Rat(2), Rat(4), Rat(2)) == 0);

  // differences far below the float guard band still come out right
  Int big = Int(1) << 60;
  CHECK(compare_power(Rat(big), Rat(1), Rat(2), Rat(60)) == 0);
  CHECK(compare_power(Rat(big + 1), Rat(1), Rat(2), Rat(60)) > 0);
  CHECK(compare_power(Rat(big - 1), Rat(1), Rat(2), Rat(60)) < 0);

  // product of several powers, mixed signs of exponents
  CHECK(compare_power_product(Rat(6), {{Rat(2), Rat(1)}, {Rat(3), Rat(1)}}) == 0);
  CHECK(compare_power_product(Rat(1, 2), {{Rat(4), Rat(-1, 2)}}) == 0);
  CHECK(compare_power_product(Rat(0), {{Rat(5), Rat(2)}}) < 0);
}

TEST_CASE("log helpers") {
  CHECK(log10_int(Int(1000)) == doctest::Approx(3.0).epsilon(1e-12));
  Int big = int_pow(Int(10), 50);
  CHECK(log10_int(big) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(log10_rat(Rat(1, 100)) == doctest::Approx(-2.0).epsilon(1e-12));

  std::vector<double> xs{8, 16, 32, 64};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(x * x * x);  // exact cube growth
  CHECK(loglog_slope(xs, ys) == doctest::Approx(3.0).epsilon(1e-9));
}
