#include <doctest.h>

#include <cmath>

#include "rcgn/logreal.hpp"

using namespace rcgn;

TEST_CASE("logreal round trips through doubles") {
  for (double v : {0.0, 1.0, -1.0, 0.5, -3.25, 1e300, -1e-300}) {
    LogReal x = LogReal::from_double(v);
    CHECK(x.to_double() == doctest::Approx(v).epsilon(1e-12));
  }
  CHECK(LogReal::from_double(0.0).is_zero());
}

TEST_CASE("arithmetic matches double arithmetic in range") {
  auto a = LogReal::from_double(3.5), b = LogReal::from_double(-1.25);
  CHECK((a * b).to_double() == doctest::Approx(-4.375));
  CHECK((a / b).to_double() == doctest::Approx(-2.8));
  CHECK((a + b).to_double() == doctest::Approx(2.25));
  CHECK((a - b).to_double() == doctest::Approx(4.75));
  CHECK(pow(a, 2.0).to_double() == doctest::Approx(12.25));
  CHECK(pow(b, 3.0).to_double() == doctest::Approx(-1.953125));
}

TEST_CASE("magnitudes far outside double range stay exact in log space") {
  // rho^q at eps = 2^-40, q = 20: lg = -800 * log 2
  LogReal tiny{1, -800 * std::log(2.0)};
  LogReal tinier{1, -900 * std::log(2.0)};
  CHECK(tinier < tiny);
  CHECK((tiny * tiny).lg == doctest::Approx(-1600 * std::log(2.0)));
  // exp(-1/eps) at eps = 2^-40 underflows as a double but not here
  LogReal e = exp(LogReal::from_double(-std::pow(2.0, 40)));
  CHECK(e.sgn == 1);
  CHECK(e.lg == doctest::Approx(-std::pow(2.0, 40)));
  CHECK(e < tinier);
}

TEST_CASE("cancellation of equal magnitudes yields zero") {
  auto a = LogReal::from_double(7.25);
  CHECK((a - a).is_zero());
  CHECK((a + (-a)).is_zero());
}

TEST_CASE("negative base with fractional exponent is a domain error") {
  auto b = LogReal::from_double(-2.0);
  CHECK_THROWS_AS(pow(b, 0.5), DomainError);
  CHECK(pow(b, 2.0).sgn == 1);
  CHECK(pow(b, 3.0).sgn == -1);
}

TEST_CASE("comparisons respect signs") {
  auto neg = LogReal::from_double(-5.0), pos = LogReal::from_double(0.001);
  CHECK(neg < pos);
  CHECK(neg < LogReal::zero());
  CHECK(LogReal::zero() < pos);
  CHECK(min(neg, pos).to_double() == doctest::Approx(-5.0));
  CHECK(max(neg, pos).to_double() == doctest::Approx(0.001));
}
