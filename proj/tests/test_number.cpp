#include <doctest.h>

#include <cmath>

#include "rcgn/number.hpp"

using namespace rcgn;

namespace {
Config cfg;
GaugePtr rho_eps() { return make_gauge("eps", 0, cfg.grid); }
}  // namespace

TEST_CASE("valuation: rho^3 has valuation 3") {
  auto rho = rho_eps();
  auto v = valuation(pow(gauge_ref(rho), c(3)), rho, cfg);
  CHECK(v.kind == ValuationResult::Exact);
  CHECK(v.v == doctest::Approx(3.0));
}

TEST_CASE("valuation: constants sit at 0") {
  auto rho = rho_eps();
  auto v = valuation(c(5), rho, cfg);
  CHECK(v.kind == ValuationResult::Exact);
  CHECK(v.v == doctest::Approx(0.0));
}

TEST_CASE("valuation: exp(1/eps) is -inf against eps") {
  auto rho = rho_eps();
  auto v = valuation(exp(div(c(1), eps())), rho, cfg);
  CHECK(v.kind == ValuationResult::MinusInf);
}

TEST_CASE("valuation: product rule on the symbolic subset") {
  auto rho = rho_eps();
  auto x = pow(eps(), c(2));
  auto y = mul(c(3), pow(eps(), c(1.5)));
  auto vx = valuation(x, rho, cfg), vy = valuation(y, rho, cfg);
  auto vxy = valuation(mul(x, y), rho, cfg);
  REQUIRE(vx.kind == ValuationResult::Exact);
  REQUIRE(vy.kind == ValuationResult::Exact);
  REQUIRE(vxy.kind == ValuationResult::Exact);
  CHECK(vxy.v == doctest::Approx(vx.v + vy.v));
}

TEST_CASE("is_moderate: rho^-7 proven with witness 7") {
  auto rho = rho_eps();
  auto v = is_moderate(pow(gauge_ref(rho), c(-7)), rho, cfg);
  CHECK(v.proven());
  CHECK(*v.witness == 7);
}

TEST_CASE("is_moderate: exp(1/eps) refuted") {
  auto rho = rho_eps();
  CHECK(is_moderate(exp(div(c(1), eps())), rho, cfg).refuted());
}

TEST_CASE("is_negligible: zero proven, exp(-1/eps) proven, rho^3 refuted at q=4") {
  auto rho = rho_eps();
  CHECK(is_negligible(c(0), rho, cfg).proven());
  auto en = is_negligible(exp(neg(div(c(1), eps()))), rho, cfg);
  CHECK(en.proven());
  auto r3 = is_negligible(pow(gauge_ref(rho), c(3)), rho, cfg);
  CHECK(r3.refuted());
  CHECK(*r3.witness == 4);
}

TEST_CASE("negligible implies moderate on grammar nets") {
  auto rho = rho_eps();
  for (auto e : {exp(neg(div(c(1), eps()))), c(0), pow(gauge_ref(rho), c(25))}) {
    if (is_negligible(e, rho, cfg).proven()) CHECK(is_moderate(e, rho, cfg).proven());
  }
}

TEST_CASE("gn arithmetic: drho + drho = 2 drho, |[-rho]| = drho, eps*eps^-1 = 1") {
  auto rho = rho_eps();
  auto drho = gn(gauge_ref(rho), rho);
  auto two_drho = gn(mul(c(2), gauge_ref(rho)), rho);
  auto sum = gn_add(drho, drho);
  CHECK(gn_compare(sum, two_drho, cfg).is(OrderVerdict::EQ));
  auto abs_neg = gn_abs(gn(neg(gauge_ref(rho)), rho));
  CHECK(gn_compare(abs_neg, drho, cfg).is(OrderVerdict::EQ));
  auto prod = gn_mul(gn(eps(), rho), gn(pow(eps(), c(-1)), rho));
  CHECK(gn_compare(prod, gn_const(1, rho), cfg).is(OrderVerdict::EQ));
}

TEST_CASE("gn arithmetic rejects gauge mismatch") {
  auto a = gn_const(1, rho_eps());
  auto b = gn_const(1, make_gauge("pow", 2, cfg.grid));
  CHECK_THROWS_AS(gn_add(a, b), TypeError);
}

TEST_CASE("gn_compare: drho < 1 with witness q=1") {
  auto rho = rho_eps();
  auto v = gn_compare(gn(gauge_ref(rho), rho), gn_const(1, rho), cfg);
  CHECK(v.is(OrderVerdict::LT));
  CHECK(*v.q == 1);
}

TEST_CASE("gn_compare: grid-parity sign gives a subpoint verdict") {
  auto rho = rho_eps();
  // (-1)^{int(log2(1/eps))} alternates along the default dyadic grid
  auto flip = pow(c(-1), intpart(div(log(div(c(1), eps())), log(c(2)))));
  auto v = gn_compare(gn(flip, rho), gn_const(0, rho), cfg);
  CHECK(v.is(OrderVerdict::SubpointOnly));
  CHECK(!v.pos_idx.empty());
  CHECK(!v.neg_idx.empty());
}

TEST_CASE("gn_compare: piecewise representative of zero is EQ zero") {
  auto rho = rho_eps();
  // at fixed n the net is 0 for all eps < 1/(n+1): a representative of zero
  long long n = 9;
  auto rep = piecewise(eps(), c(1.0 / (double)(n + 1)), true, c(0), c(1));
  auto v = gn_compare(gn(rep, rho), gn_const(0, rho), cfg);
  CHECK(v.is(OrderVerdict::EQ));
}

TEST_CASE("gn_compare transitivity witness: LT(x,y), LT(y,z) => LT(x,z)") {
  auto rho = rho_eps();
  auto x = gn(gauge_ref(rho), rho);
  auto y = gn_const(0.5, rho);
  auto z = gn_const(1, rho);
  auto v1 = gn_compare(x, y, cfg), v2 = gn_compare(y, z, cfg);
  REQUIRE(v1.is(OrderVerdict::LT));
  REQUIRE(v2.is(OrderVerdict::LT));
  auto v3 = gn_compare(x, z, cfg);
  REQUIRE(v3.is(OrderVerdict::LT));
  CHECK(*v3.q <= std::max(*v1.q, *v2.q) + 1);
}

TEST_CASE("EQ is a congruence for + and *") {
  auto rho = rho_eps();
  auto x = gn_const(2, rho);
  auto xp = gn(add(c(2), exp(neg(div(c(1), eps())))), rho);  // x + negligible
  auto y = gn(eps(), rho);
  auto yp = gn(add(eps(), mul(c(3), exp(neg(div(c(2), eps()))))), rho);
  REQUIRE(gn_compare(x, xp, cfg).is(OrderVerdict::EQ));
  REQUIRE(gn_compare(y, yp, cfg).is(OrderVerdict::EQ));
  CHECK(gn_compare(gn_add(x, y), gn_add(xp, yp), cfg).is(OrderVerdict::EQ));
  CHECK(gn_compare(gn_mul(x, y), gn_mul(xp, yp), cfg).is(OrderVerdict::EQ));
}
