#include <doctest.h>

#include <cmath>

#include "rcgn/hypersum.hpp"

using namespace rcgn;

namespace {
Config cfg;
GaugePtr g_eps() { return make_gauge("eps", 0, cfg.grid); }
HyperNatural omega(const GaugePtr& g) {
  return hypernat_from_net(intpart(div(c(1), eps())), g, cfg);
}
double eval_rep(const GeneralizedNumber& x, double ev) {
  return eval_d(x.rep, EvalCtx{ev, std::nullopt, std::nullopt, &cfg});
}
}  // namespace

TEST_CASE("divergent hypersum identities at omega = int(1/eps)") {
  auto rho = g_eps();
  auto om = omega(rho);
  auto om_gn = gn(om.rep, rho);

  // sum_{n=1}^{omega} 1 = omega
  auto ones = make_sequence(c(1), rho, rho, 1);
  auto s1 = hypersum(ones, hypernat_const(1, rho), om, cfg);
  CHECK(gn_compare(s1, om_gn, cfg).is(OrderVerdict::EQ));
  CHECK(eval_rep(s1, 0.01) == 100.0);

  // sum_{n=1}^{omega} n = omega(omega+1)/2, 5050 at eps = 0.01
  auto lin = make_sequence(var_n(), rho, rho, 1);
  auto s2 = hypersum(lin, hypernat_const(1, rho), om, cfg);
  auto tri = gn(div(mul(om.rep, add(om.rep, c(1))), c(2)), rho);
  CHECK(gn_compare(s2, tri, cfg).is(OrderVerdict::EQ));
  CHECK(eval_rep(s2, 0.01) == 5050.0);

  // sum_{n=1}^{omega} (2n-1) = omega^2
  auto odd = make_sequence(sub(mul(c(2), var_n()), c(1)), rho, rho, 1);
  auto s3 = hypersum(odd, hypernat_const(1, rho), om, cfg);
  CHECK(gn_compare(s3, gn(pow(om.rep, c(2)), rho), cfg).is(OrderVerdict::EQ));
  CHECK(eval_rep(s3, 0.01) == 10000.0);

  // arithmetic progression: omega a + omega^2 d/2 - omega d/2
  double A = 3, D = 0.5;
  auto ap = make_sequence(add(c(A), mul(c(D), sub(var_n(), c(1)))), rho, rho, 1);
  auto s4 = hypersum(ap, hypernat_const(1, rho), om, cfg);
  auto closed = gn(add(mul(c(A), om.rep),
                       sub(div(mul(c(D), pow(om.rep, c(2))), c(2)),
                           div(mul(c(D), om.rep), c(2)))),
                   rho);
  CHECK(gn_compare(s4, closed, cfg).is(OrderVerdict::EQ));

  // sum_{n=0}^{omega} (-1)^n = ((-1)^omega + 1)/2; equals 1 at eps = 0.01
  auto alt = make_sequence(pow(c(-1), var_n()), rho, rho, 0);
  auto s5 = hypersum(alt, hypernat_const(0, rho), om, cfg);
  auto alt_closed = gn(div(add(pow(c(-1), om.rep), c(1)), c(2)), rho);
  CHECK(gn_compare(s5, alt_closed, cfg).is(OrderVerdict::EQ));
  CHECK(eval_rep(s5, 0.01) == 1.0);
}

TEST_CASE("hypersum agrees with finite sums and direct recomputation bit for bit") {
  auto rho = g_eps();
  auto geo = make_sequence(pow(c(0.5), var_n()), rho, rho);
  auto s = hypersum(geo, hypernat_const(2, rho), hypernat_const(5, rho), cfg);
  // ordinary finite sum 1/4 + 1/8 + 1/16 + 1/32
  CHECK(eval_rep(s, 0.37) == doctest::Approx(0.46875).epsilon(1e-15));

  // bit-level: an independently written compensated loop
  auto om = omega(rho);
  auto alt_h = make_sequence(div(pow(c(-1), var_n()), add(var_n(), c(1))), rho, rho);
  auto sum_gn = hypersum(alt_h, hypernat_const(0, rho), om, cfg);
  for (double ev : cfg.grid.points()) {
    long long N = static_cast<long long>(ni(om, ev));
    if (N > cfg.sum_cap) break;
    double acc = 0, comp = 0;
    for (long long n = 0; n <= N; ++n) {
      double term = ((n % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(n + 1);
      double y = term - comp;
      double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    CHECK(eval_rep(sum_gn, ev) == acc);
  }
}

TEST_CASE("hypersum additivity across windows") {
  auto rho = g_eps();
  auto seq = make_sequence(div(c(1), add(var_n(), c(1))), rho, rho);
  is_moderate_over_hypersums(seq, cfg);
  auto N = hypernat_const(3, rho);
  auto M = omega(rho);
  auto K = hypernat_from_net(intpart(mul(c(2), pow(eps(), c(-1)))), rho, cfg);
  auto s_nm = hypersum(seq, N, M, cfg);
  auto M1 = hypernat_add_const(M, 1);
  auto s_mk = hypersum(seq, M1, K, cfg);
  auto s_nk = hypersum(seq, N, K, cfg);
  auto lhs = gn_add(s_nm, s_mk);
  CHECK(gn_compare(lhs, s_nk, cfg).is(OrderVerdict::EQ));
}

TEST_CASE("hypersum on unclassified input is a typed failure") {
  auto rho = g_eps();
  auto bad = make_sequence(pow(c(2), var_n()), rho, rho);
  CHECK_THROWS_AS(hypersum(bad, hypernat_const(0, rho), omega(rho), cfg), TypeError);
}

TEST_CASE("geometric hyperseries certifies with the log-ratio witness") {
  auto rho = g_eps();
  auto geo = make_sequence(pow(c(0.5), var_n()), rho, rho);
  auto r = hyperseries_sum(geo, std::nullopt, cfg);
  REQUIRE(r.status == HyperseriesResult::Converges);
  REQUIRE(r.sum.has_value());
  CHECK(gn_compare(*r.sum, gn_const(2, rho), cfg).is(OrderVerdict::EQ));
  REQUIRE(r.certificate.size() == static_cast<size_t>(cfg.q_max));
  // stored witnesses have the closed form int(q log rho / log k) + 1
  for (const auto& pair : r.certificate) {
    double ev = 1.0 / 1024.0;
    double expect = std::floor(pair.q * std::log(ev) / std::log(0.5)) + 1;
    CHECK(ni(pair.M, ev) == expect);
    CHECK(recheck_cert_pair(geo, *r.sum, pair, cfg));
  }
}

TEST_CASE("geometric hyperseries respects the sigma <= rho* boundary") {
  auto rho = g_eps();
  // sigma = eps^2 <= rho*: still certifies
  auto geo2 = make_sequence(pow(c(0.5), var_n()), make_gauge("pow", 2, cfg.grid), rho);
  CHECK(hyperseries_sum(geo2, std::nullopt, cfg).status == HyperseriesResult::Converges);
  // sigma = loglog: the log-ratio witness is not sigma-moderate, no verdict
  auto geo_ll = make_sequence(pow(c(0.5), var_n()), make_gauge("loglog", 0, cfg.grid), rho);
  auto r = hyperseries_sum(geo_ll, std::nullopt, cfg);
  CHECK(r.status == HyperseriesResult::NoVerdict);
  bool witness_failure = false;
  for (const auto& e : r.evidence)
    if (e.find("not sigma-moderate") != std::string::npos) witness_failure = true;
  CHECK(witness_failure);
}

TEST_CASE("exponential hyperseries: sum of x^n/n! at x=1 is e") {
  auto rho = g_eps();
  auto ex = make_sequence(div(pow(c(1), var_n()), factorial(var_n())), rho, rho);
  auto r = hyperseries_sum(ex, std::nullopt, cfg);
  REQUIRE(r.status == HyperseriesResult::Converges);
  CHECK(eval_rep(*r.sum, 0.25) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  for (const auto& pair : r.certificate) CHECK(recheck_cert_pair(ex, *r.sum, pair, cfg));
}

TEST_CASE("candidate route: matching candidate accepted, mismatching rejected") {
  auto rho = g_eps();
  auto geo = make_sequence(pow(c(0.5), var_n()), rho, rho);
  auto ok = hyperseries_sum(geo, gn_const(2, rho), cfg);
  CHECK(ok.status == HyperseriesResult::Converges);
  auto bad = hyperseries_sum(geo, gn_const(3, rho), cfg);
  CHECK(bad.status == HyperseriesResult::NoVerdict);
}

TEST_CASE("geometric ratio above 1 yields divergence evidence, not convergence") {
  auto rho = g_eps();
  auto geo = make_sequence(pow(c(1.5), var_n()), rho, rho);
  auto r = hyperseries_sum(geo, std::nullopt, cfg);
  CHECK(r.status != HyperseriesResult::Converges);
  CHECK(!r.evidence.empty());
}

TEST_CASE("divergent hyperseries: constants and linear terms blow past rho^-q") {
  auto rho = g_eps();
  auto ones = make_sequence(c(1), rho, rho);
  CHECK(hyperseries_sum(ones, std::nullopt, cfg).status == HyperseriesResult::DivergesPlus);
  auto lin = make_sequence(var_n(), rho, rho);
  CHECK(hyperseries_sum(lin, std::nullopt, cfg).status == HyperseriesResult::DivergesPlus);
  auto neg_ones = make_sequence(c(-1), rho, rho);
  CHECK(hyperseries_sum(neg_ones, std::nullopt, cfg).status == HyperseriesResult::DivergesMinus);
}

TEST_CASE("harmonic series diverges by the monotone non-Cauchy route") {
  auto rho = g_eps();
  auto h = make_sequence(div(c(1), var_n()), rho, rho, 1);
  auto r = hyperseries_sum(h, std::nullopt, cfg);
  CHECK(r.status == HyperseriesResult::DivergesPlus);
}

TEST_CASE("alternating harmonic converges to log 2") {
  auto rho = g_eps();
  auto ah = make_sequence(div(pow(c(-1), add(var_n(), c(1))), var_n()), rho, rho, 1);
  auto r = hyperseries_sum(ah, std::nullopt, cfg);
  REQUIRE(r.status == HyperseriesResult::Converges);
  CHECK(eval_rep(*r.sum, 0.125) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("tail identity: finite, hyperfinite and alternating windows") {
  auto rho = g_eps();
  auto geo = make_sequence(pow(c(0.5), var_n()), rho, rho);
  CHECK(tail_identity_check(geo, hypernat_const(3, rho), hypernat_const(5, rho), cfg).proven());
  auto lin = make_sequence(var_n(), rho, rho);
  auto om = omega(rho);
  CHECK(tail_identity_check(lin, om, om, cfg).proven());
  auto alt = make_sequence(pow(c(-1), var_n()), rho, rho);
  CHECK(tail_identity_check(alt, om, hypernat_const(1, rho), cfg).proven());
}

TEST_CASE("tail_vanishes: geometric proven, constants refuted, p=2 proven") {
  auto rho = g_eps();
  auto geo = make_sequence(pow(c(0.5), var_n()), rho, rho);
  auto rg = hyperseries_sum(geo, std::nullopt, cfg);
  REQUIRE(rg.status == HyperseriesResult::Converges);
  CHECK(tail_vanishes(geo, rg, cfg).proven());

  auto ones = make_sequence(c(1), rho, rho);
  auto r1 = hyperseries_sum(ones, std::nullopt, cfg);
  CHECK(tail_vanishes(ones, r1, cfg).refuted());

  auto p2 = make_sequence(div(c(1), pow(var_n(), c(2))), rho, rho, 1);
  auto rp = hyperseries_sum(p2, std::nullopt, cfg);
  REQUIRE(rp.status == HyperseriesResult::Converges);
  CHECK(tail_vanishes(p2, rp, cfg).proven());
}

TEST_CASE("Cesaro hypersums: alternating unit averages to 1/2") {
  auto rho = g_eps();
  auto alt = make_sequence(pow(c(-1), var_n()), rho, rho);
  auto r = cesaro_sum(alt, cfg);
  REQUIRE(r.status == HyperseriesResult::Converges);
  CHECK(gn_compare(*r.sum, gn_const(0.5, rho), cfg).is(OrderVerdict::EQ));
}

TEST_CASE("Cesaro consistency: convergent series keep their sum") {
  auto rho = g_eps();
  auto geo = make_sequence(pow(c(0.5), var_n()), rho, rho);
  auto ordinary = hyperseries_sum(geo, std::nullopt, cfg);
  auto ces = cesaro_sum(geo, cfg);
  REQUIRE(ordinary.status == HyperseriesResult::Converges);
  REQUIRE(ces.status == HyperseriesResult::Converges);
  CHECK(gn_compare(*ordinary.sum, *ces.sum, cfg).is(OrderVerdict::EQ));

  auto zero = make_sequence(c(0), rho, rho);
  auto rz = cesaro_sum(zero, cfg);
  REQUIRE(rz.status == HyperseriesResult::Converges);
  CHECK(gn_compare(*rz.sum, gn_const(0, rho), cfg).is(OrderVerdict::EQ));
}

TEST_CASE("gauge_from_epswise covers the three paper shapes") {
  auto mu = g_eps();
  // M = 1: sigma = eps
  auto s1 = gauge_from_epswise(c(1), mu, cfg);
  auto r1 = compare_gauges(s1, mu, cfg);
  CHECK(r1.ge_star.proven());
  CHECK(r1.le_star.proven());
  // M = int(exp(1/eps)): sigma on the exp(-1/eps) scale; sigma >= eps* fails
  auto s2 = gauge_from_epswise(intpart(exp(div(c(1), eps()))), mu, cfg);
  auto r2 = compare_gauges(s2, mu, cfg);
  CHECK(r2.ge_star.refuted());
  // M = int(1/eps): R_sigma = R_mu
  auto s3 = gauge_from_epswise(intpart(div(c(1), eps())), mu, cfg);
  auto r3 = compare_gauges(s3, mu, cfg);
  CHECK(r3.ge_star.proven());
  CHECK(r3.le_star.proven());
  // M must be >= 1
  CHECK_THROWS_AS(gauge_from_epswise(eps(), mu, cfg), TypeError);
}

TEST_CASE("epswise absolute convergence: geometric, squared factorials, p=2") {
  auto mu = g_eps();
  auto rho = g_eps();

  auto [s1, r1] = epswise_abs_convergence(pow(c(0.5), var_n()), 0, mu, rho, cfg);
  REQUIRE(r1.status == HyperseriesResult::Converges);
  CHECK(eval_rep(*r1.sum, 0.01) == doctest::Approx(2.0).epsilon(1e-12));

  auto inv_fact_sq = div(c(1), mul(factorial(var_n()), factorial(var_n())));
  auto [s2, r2] = epswise_abs_convergence(inv_fact_sq, 0, mu, rho, cfg);
  REQUIRE(r2.status == HyperseriesResult::Converges);
  // Bessel I0(2) by brute-force partial sums
  CHECK(eval_rep(*r2.sum, 0.01) == doctest::Approx(2.2795853023360673).epsilon(1e-12));

  auto [s3, r3] = epswise_abs_convergence(div(c(1), pow(var_n(), c(2))), 1, mu, rho, cfg);
  REQUIRE(r3.status == HyperseriesResult::Converges);
  double pi2_6 = 1.6449340668482264;  // partial sums + integral tail at desk precision
  CHECK(eval_rep(*r3.sum, 0.01) == doctest::Approx(pi2_6).epsilon(1e-6));
}

TEST_CASE("hypersum is additive and homogeneous in the sequence (module laws)") {
  auto rho = g_eps();
  auto a = make_sequence(pow(c(0.5), var_n()), rho, rho);
  auto b = make_sequence(div(c(1), add(mul(var_n(), var_n()), c(1))), rho, rho);
  auto sum_ab = make_sequence(add(a.rep, b.rep), rho, rho);
  auto N = hypernat_const(1, rho);
  auto M = omega(rho);
  auto lhs = gn_add(hypersum(a, N, M, cfg), hypersum(b, N, M, cfg));
  auto rhs = hypersum(sum_ab, N, M, cfg);
  CHECK(gn_compare(lhs, rhs, cfg).is(OrderVerdict::EQ));

  auto r = gn(add(c(2), eps()), rho);  // scalar from the ring
  auto scaled = seq_scale(a, r.rep);
  auto lhs2 = gn_mul(r, hypersum(a, N, M, cfg));
  auto rhs2 = hypersum(scaled, N, M, cfg);
  CHECK(gn_compare(lhs2, rhs2, cfg).is(OrderVerdict::EQ));
}
