#include <doctest.h>

#include <cmath>

#include "rcgn/gauge.hpp"

using namespace rcgn;

namespace {
Config cfg;
}

TEST_CASE("make_gauge families evaluate correctly") {
  auto id = make_gauge("eps", 0, cfg.grid);
  CHECK(id->value(0.25) == doctest::Approx(0.25));

  auto p2 = make_gauge("pow", 2, cfg.grid);
  CHECK(p2->value(0.1) == doctest::Approx(0.01));

  auto e1 = make_gauge("expinv", 1, cfg.grid);
  CHECK(e1->value(0.5) == doctest::Approx(std::exp(-2.0)));
  CHECK(e1->log_value(std::pow(2.0, -40)) == doctest::Approx(-std::pow(2.0, 40)));

  auto ll = make_gauge("loglog", 0, cfg.grid);
  double deep = std::pow(2.0, -40);
  CHECK(ll->value(deep) == doctest::Approx(1.0 / std::log(std::log(1.0 / deep))));
  CHECK(ll->value(0.5) == 1.0);  // clamped into (0,1] at shallow eps
}

TEST_CASE("make_gauge rejects out-of-domain parameters") {
  CHECK_THROWS_AS(make_gauge("pow", -1, cfg.grid), ConfigError);
  CHECK_THROWS_AS(make_gauge("pow", 0, cfg.grid), ConfigError);
  CHECK_THROWS_AS(make_gauge("expinv", -2, cfg.grid), ConfigError);
  CHECK_THROWS_AS(make_gauge("nosuch", 1, cfg.grid), ConfigError);
  // a custom term above 1 violates (0,1]
  auto bad = Gauge::custom(mul(c(3), eps()), "3eps");
  CHECK_THROWS_AS(bad->validate(cfg.grid), ConfigError);
}

TEST_CASE("compare_gauges: reflexivity on every built-in") {
  for (auto g : {make_gauge("eps", 0, cfg.grid), make_gauge("pow", 3, cfg.grid),
                 make_gauge("expinv", 1, cfg.grid), make_gauge("loglog", 0, cfg.grid)}) {
    auto rel = compare_gauges(g, g, cfg);
    CHECK(rel.ge_star.proven());
    CHECK(rel.le_star.proven());
    CHECK(*rel.ge_star.witness == 1);
    CHECK(*rel.le_star.witness == 1);
  }
}

TEST_CASE("compare_gauges: eps vs eps^2") {
  auto s = make_gauge("eps", 0, cfg.grid);
  auto r = make_gauge("pow", 2, cfg.grid);
  auto rel = compare_gauges(s, r, cfg);
  CHECK(rel.ge_star.proven());
  CHECK(*rel.ge_star.witness == 1);
  CHECK(rel.le_star.refuted());
}

TEST_CASE("compare_gauges: loglog gauge is not <= eps*") {
  auto s = make_gauge("loglog", 0, cfg.grid);
  auto r = make_gauge("eps", 0, cfg.grid);
  auto rel = compare_gauges(s, r, cfg);
  CHECK(rel.le_star.refuted());
  CHECK(rel.ge_star.proven());
}

TEST_CASE("compare_gauges: expinv below every power gauge") {
  auto s = make_gauge("expinv", 1, cfg.grid);
  auto r = make_gauge("eps", 0, cfg.grid);
  auto rel = compare_gauges(s, r, cfg);
  CHECK(rel.ge_star.refuted());  // exp(-1/eps) < eps^Q eventually for every Q
  CHECK(rel.le_star.proven());
  auto back = compare_gauges(r, s, cfg);
  CHECK(back.ge_star.proven());
  CHECK(back.le_star.refuted());
}

TEST_CASE("proven witnesses recheck on the sample grid") {
  auto s = make_gauge("pow", 3, cfg.grid);
  auto r = make_gauge("eps", 0, cfg.grid);
  auto rel = compare_gauges(s, r, cfg);
  REQUIRE(rel.ge_star.proven());
  REQUIRE(rel.le_star.proven());
  auto pts = cfg.grid.points();
  for (int k = rel.ge_star.grid_from; k <= rel.ge_star.grid_to; ++k) {
    // sigma >= rho^Q1 in log space
    CHECK(s->log_value(pts[k]) >= *rel.ge_star.witness * r->log_value(pts[k]) - 1e-12);
  }
  for (int k = rel.le_star.grid_from; k <= rel.le_star.grid_to; ++k) {
    CHECK(s->log_value(pts[k]) <= *rel.le_star.witness * r->log_value(pts[k]) + 1e-12);
  }
}

TEST_CASE("antisymmetry: le_star both ways with Q=1 forces equality on the tail") {
  auto a = make_gauge("eps", 0, cfg.grid);
  auto b = make_gauge("pow", 1, cfg.grid);  // same net, different construction
  auto ab = compare_gauges(a, b, cfg);
  auto ba = compare_gauges(b, a, cfg);
  REQUIRE(ab.le_star.proven());
  REQUIRE(ba.le_star.proven());
  REQUIRE(*ab.le_star.witness == 1);
  REQUIRE(*ba.le_star.witness == 1);
  auto pts = cfg.grid.points();
  int from = std::max(ab.le_star.grid_from, ba.le_star.grid_from);
  for (int k = from; k < cfg.grid.count; ++k)
    CHECK(a->log_value(pts[k]) == doctest::Approx(b->log_value(pts[k])).epsilon(1e-14));
}

TEST_CASE("derived gauge min(mu, 1/M)") {
  // M = int(1/eps): sigma comparable to eps
  auto mu = make_gauge("eps", 0, cfg.grid);
  auto m = intpart(div(c(1), eps()));
  auto sig = Gauge::derived_min(mu, m);
  sig->validate(cfg.grid);
  auto rel = compare_gauges(sig, mu, cfg);
  CHECK(rel.ge_star.proven());
  CHECK(rel.le_star.proven());
}
