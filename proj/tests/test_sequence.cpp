#include <doctest.h>

#include <cmath>

#include "rcgn/sequence.hpp"

using namespace rcgn;

namespace {
Config cfg;
GaugePtr g_eps() { return make_gauge("eps", 0, cfg.grid); }

ExprPtr geom(double k) { return pow(c(k), var_n()); }
ExprPtr expseq(double x) { return div(pow(c(x), var_n()), factorial(var_n())); }
// the paper's representative of zero whose hypersums count indices:
// 0 if eps < 1/(n+1), else 1
ExprPtr repr_count() {
  return piecewise(eps(), div(c(1), add(var_n(), c(1))), true, c(0), c(1));
}
// 0 if eps <= 1/n else (1-eps)^{-n}, written with a total condition
ExprPtr infty_series_rep() {
  return piecewise(mul(var_n(), eps()), c(1), false, c(0), pow(sub(c(1), eps()), neg(var_n())));
}
}  // namespace

TEST_CASE("form recognition covers the core shapes") {
  CHECK(recognize_form(geom(0.5)).kind == SeqForm::Geometric);
  CHECK(recognize_form(expseq(1)).kind == SeqForm::Exponential);
  CHECK(recognize_form(pow(c(-1), var_n())).kind == SeqForm::AlternatingUnit);
  CHECK(recognize_form(var_n()).kind == SeqForm::PolyLinear);
  CHECK(recognize_form(add(c(3), mul(c(2), var_n()))).kind == SeqForm::PolyLinear);
  CHECK(recognize_form(div(c(1), pow(var_n(), c(2)))).kind == SeqForm::PowerLaw);
  CHECK(recognize_form(div(pow(c(-1), var_n()), var_n())).kind == SeqForm::AltFactor);
  CHECK(recognize_form(mul(pow(c(-1), var_n()), geom(0.5))).kind == SeqForm::Geometric);
  CHECK(recognize_form(repr_count()).kind == SeqForm::Generic);
}

TEST_CASE("closed partial sums match direct summation") {
  for (auto rep : {geom(0.5), pow(c(-1), var_n()), add(c(2), mul(c(3), var_n())), c(1)}) {
    auto closed = closed_partial_sum(rep, c(3), c(17));
    REQUIRE(closed.has_value());
    for (double ev : {0.5, 0.01}) {
      double direct = window_sum(rep, ev, 3, 17, cfg);
      EvalCtx ctx{ev, std::nullopt, std::nullopt, &cfg};
      CHECK(eval_d(*closed, ctx) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  // empty window
  auto closed = closed_partial_sum(geom(0.5), c(5), c(2));
  EvalCtx ctx{0.5, std::nullopt, std::nullopt, &cfg};
  CHECK(eval_d(*closed, ctx) == 0.0);
}

TEST_CASE("moderate over hypersums: geometric works for every gauge sigma") {
  auto rho = g_eps();
  for (auto sigma : {g_eps(), make_gauge("expinv", 1, cfg.grid), make_gauge("loglog", 0, cfg.grid)}) {
    auto a = make_sequence(geom(0.5), sigma, rho);
    CHECK(is_moderate_over_hypersums(a, cfg).proven());
  }
}

TEST_CASE("Lemma-style iff: constant net 1 moderate over hypersums iff sigma >= rho*") {
  auto rho = g_eps();
  auto a_ok = make_sequence(c(1), g_eps(), rho);
  CHECK(is_moderate_over_hypersums(a_ok, cfg).proven());
  auto a_bad = make_sequence(c(1), make_gauge("expinv", 1, cfg.grid), rho);
  CHECK(is_moderate_over_hypersums(a_bad, cfg).refuted());
}

TEST_CASE("2^n is not moderate over hypersums when sigma = rho = eps") {
  auto a = make_sequence(geom(2.0), g_eps(), g_eps());
  auto v = is_moderate_over_hypersums(a, cfg);
  CHECK(v.refuted());
}

TEST_CASE("the counting representative's sums refute moderateness pathologies") {
  // eq-style pin: sum to N = int(1/eps)^2 of the patched geometric rep blows up
  auto a = make_sequence(infty_series_rep(), g_eps(), g_eps());
  auto v = is_moderate_over_hypersums(a, cfg);
  CHECK(v.refuted());
}

TEST_CASE("are_equivalent: reflexive, and the counting representative is NOT zero") {
  auto rho = g_eps();
  auto a = make_sequence(repr_count(), rho, rho);
  auto b = make_sequence(c(0), rho, rho);
  CHECK(are_equivalent(a, a, cfg).proven());
  auto v = are_equivalent(a, b, cfg);
  CHECK(v.refuted());
  // window value: sum_{n=0}^{N} = N - ceil(1/eps) + 2 at eps = 0.01, N = 10000
  double w = window_sum(repr_count(), 0.01, 0, 10000, cfg);
  CHECK(w == 10000 - 100 + 2);
}

TEST_CASE("pointwise-equal representatives need not be equivalent (regression pin)") {
  // every a_n equals 0 in the ring, yet the sequences differ in the hyperseries space
  auto rho = g_eps();
  auto a = make_sequence(repr_count(), rho, rho);
  for (long long n : {0LL, 3LL, 17LL}) {
    auto an = gn(subst_n(repr_count(), c(static_cast<double>(n))), rho);
    CHECK(gn_compare(an, gn_const(0, rho), cfg).is(OrderVerdict::EQ));
  }
  CHECK(are_equivalent(a, make_sequence(c(0), rho, rho), cfg).refuted());
}

TEST_CASE("negligible perturbations keep equivalence") {
  auto rho = g_eps();
  auto a = make_sequence(geom(0.5), rho, rho);
  auto pert = add(geom(0.5), mul(exp(neg(div(c(1), eps()))), pow(c(0.5), var_n())));
  auto b = make_sequence(pert, rho, rho);
  CHECK(are_equivalent(a, b, cfg).proven());
}

TEST_CASE("uniform moderateness: k^n proven with Q=0, x^n/n! proven, n refuted") {
  auto rho = g_eps();
  auto a = make_sequence(geom(0.5), rho, rho);
  auto va = is_uniformly_moderate(a, cfg);
  CHECK(va.proven());
  CHECK(*va.witness == 0);

  auto b = make_sequence(expseq(1), rho, rho);
  CHECK(is_uniformly_moderate(b, cfg).proven());

  auto d = make_sequence(var_n(), rho, rho);
  CHECK(is_uniformly_moderate(d, cfg).refuted());

  // the patched geometric rep is unbounded in n at every eps
  auto e = make_sequence(infty_series_rep(), rho, rho);
  CHECK(is_uniformly_moderate(e, cfg).refuted());

  // the counting rep is by contrast uniformly bounded by 1
  auto f = make_sequence(repr_count(), rho, rho);
  CHECK(is_uniformly_moderate(f, cfg).proven());
}

TEST_CASE("lambda embedding transfers uniform moderateness to probe hypersums") {
  auto rho = g_eps();
  auto rel = compare_gauges(rho, rho, cfg);
  REQUIRE(rel.ge_star.proven());
  auto a = make_sequence(c(1), rho, rho);
  auto emb = lambda_embed(a, rel, cfg);
  REQUIRE(emb.mod_hyp.has_value());
  CHECK(emb.mod_hyp->proven());
  // re-verification from scratch agrees
  auto fresh = make_sequence(c(1), rho, rho);
  CHECK(is_moderate_over_hypersums(fresh, cfg).proven());

  auto k = make_sequence(geom(0.5), rho, rho);
  auto embk = lambda_embed(k, rel, cfg);
  CHECK(embk.mod_hyp->proven());

  auto ex = make_sequence(expseq(1), rho, rho);
  auto embx = lambda_embed(ex, rel, cfg);
  CHECK(embx.mod_hyp->proven());
}

TEST_CASE("lambda embedding requires the gauge relation certificate") {
  auto rho = g_eps();
  auto sigma = make_gauge("expinv", 1, cfg.grid);
  auto rel = compare_gauges(sigma, rho, cfg);
  REQUIRE(!rel.ge_star.proven());
  auto a = make_sequence(c(1), sigma, rho);
  CHECK_THROWS_AS(lambda_embed(a, rel, cfg), TypeError);
}

TEST_CASE("extension to hypernaturals") {
  auto rho = g_eps();
  auto a = make_sequence(geom(0.5), rho, rho);
  is_moderate_over_hypersums(a, cfg);
  auto v3 = extend_to_hypernat(a, hypernat_const(3, rho), cfg);
  CHECK(gn_compare(v3, gn_const(0.125, rho), cfg).is(OrderVerdict::EQ));

  auto lin = make_sequence(var_n(), rho, rho);
  is_moderate_over_hypersums(lin, cfg);
  auto omega = hypernat_from_net(intpart(div(c(1), eps())), rho, cfg);
  auto vo = extend_to_hypernat(lin, omega, cfg);
  CHECK(is_moderate(vo.rep, rho, cfg).proven());
  CHECK(gn_compare(vo, gn_const(1e9, rho), cfg).is(OrderVerdict::GT));  // infinite number

  auto ex = make_sequence(expseq(1), rho, rho);
  is_moderate_over_hypersums(ex, cfg);
  auto v0 = extend_to_hypernat(ex, hypernat_const(0, rho), cfg);
  CHECK(gn_compare(v0, gn_const(1, rho), cfg).is(OrderVerdict::EQ));
}

TEST_CASE("extension of unclassified sequences is a typed failure") {
  auto rho = g_eps();
  auto a = make_sequence(geom(0.5), rho, rho);
  CHECK_THROWS_AS(extend_to_hypernat(a, hypernat_const(1, rho), cfg), TypeError);
}

TEST_CASE("sharply bounded lists patch into uniformly moderate sequences") {
  auto rho = g_eps();
  std::vector<GeneralizedNumber> ones(8, gn_const(1, rho));
  auto s = from_bounded_sequence(ones, gn_const(2, rho), rho, cfg);
  REQUIRE(s.unif_mod.has_value());
  CHECK(s.unif_mod->proven());

  // values n * drho for n <= 50 stay below 1 by infinitesimal scaling
  std::vector<GeneralizedNumber> vals;
  for (int n = 0; n <= 50; ++n) vals.push_back(gn(mul(c(n), eps()), rho));
  auto s2 = from_bounded_sequence(vals, gn_const(1, rho), rho, cfg);
  CHECK(s2.unif_mod->proven());

  // a genuine violation is a typed failure
  std::vector<GeneralizedNumber> badv = {gn_const(3, rho)};
  CHECK_THROWS_AS(from_bounded_sequence(badv, gn_const(1, rho), rho, cfg), TypeError);
}

TEST_CASE("hypernat examples") {
  auto rho = g_eps();
  auto n4 = hypernat_from_net(c(4), rho, cfg);
  CHECK(ni(n4, 0.37) == 4.0);
  auto om = hypernat_from_net(intpart(div(c(1), eps())), rho, cfg);
  CHECK(om.R == 1);
  CHECK(ni(om, 0.01) == 100.0);
  // int(3 log(1/eps)/log 2) at eps = 2^-10 -> 30
  auto m = hypernat_from_net(intpart(div(mul(c(3), log(div(c(1), eps()))), log(c(2)))), rho, cfg);
  CHECK(ni(m, std::pow(2.0, -10)) == 30.0);
  CHECK_THROWS_AS(hypernat_from_net(intpart(exp(div(c(1), eps()))), rho, cfg), TypeError);
  CHECK_THROWS_AS(hypernat_from_net(add(eps(), c(1)), rho, cfg), TypeError);
}

TEST_CASE("ni is monotone under the hypernatural order") {
  auto rho = g_eps();
  auto a = hypernat_from_net(intpart(div(c(1), eps())), rho, cfg);
  auto b = hypernat_from_net(intpart(div(c(2), eps())), rho, cfg);
  auto va = gn(a.rep, rho), vb = gn(b.rep, rho);
  auto ord = gn_compare(va, vb, cfg);
  REQUIRE(ord.le_like());
  auto pts = cfg.grid.points();
  for (int k = ord.grid_from; k < cfg.grid.count; ++k)
    CHECK(ni(a, pts[k]) <= ni(b, pts[k]));
}
