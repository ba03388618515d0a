#include <doctest.h>

#include <cmath>

#include "rcgn/expr.hpp"
#include "rcgn/gauge.hpp"

using namespace rcgn;

namespace {
Config cfg;
EvalCtx at(double e, std::optional<long long> n = std::nullopt) {
  return EvalCtx{e, n, std::nullopt, &cfg};
}
}  // namespace

TEST_CASE("eval_net: eps^2 at 0.1 is 0.01") {
  auto e = pow(eps(), c(2));
  CHECK(eval_d(e, at(0.1)) == doctest::Approx(0.01));
}

TEST_CASE("eval_net: (1-eps)^-n at n=2, eps=0.5 is 4") {
  auto e = pow(sub(c(1), eps()), neg(var_n()));
  CHECK(eval_d(e, at(0.5, 2)) == doctest::Approx(4.0));
}

TEST_CASE("eval_net: piecewise representative of zero") {
  // 0 if eps < 1/(n+1) else 1; n = 9, eps = 0.05 -> 0
  auto e = piecewise(eps(), div(c(1), add(var_n(), c(1))), /*strict=*/true, c(0), c(1));
  CHECK(eval_d(e, at(0.05, 9)) == 0.0);
  CHECK(eval_d(e, at(0.2, 9)) == 1.0);
}

TEST_CASE("singularities name the offending subterm") {
  auto e = div(c(1), sub(eps(), c(0.5)));
  CHECK_THROWS_WITH_AS(eval_d(e, at(0.5)), doctest::Contains("division by zero"), EvalError);
  auto l = log(sub(eps(), c(1)));
  CHECK_THROWS_AS(eval_d(l, at(0.5)), EvalError);
}

TEST_CASE("nearest integer rounds half away from zero") {
  CHECK(eval_d(nint(c(2.5)), at(0.5)) == 3.0);
  CHECK(eval_d(nint(c(-2.5)), at(0.5)) == -3.0);
  CHECK(eval_d(intpart(c(2.9)), at(0.5)) == 2.0);
  CHECK(eval_d(intpart(c(-2.9)), at(0.5)) == -2.0);
  CHECK(eval_d(ceil(c(2.1)), at(0.5)) == 3.0);
}

TEST_CASE("factorial and binomial") {
  CHECK(eval_d(factorial(c(5)), at(0.5)) == 120.0);
  CHECK(eval_d(binom(c(5), c(2)), at(0.5)) == 10.0);
  CHECK(eval_d(binom(c(5), c(7)), at(0.5)) == 0.0);
  CHECK_THROWS_AS(eval_d(factorial(c(2.5)), at(0.5)), EvalError);
}

TEST_CASE("log-space evaluation agrees with double evaluation in range") {
  auto exprs = {
      pow(eps(), c(3)),
      mul(c(2.5), exp(neg(div(c(1), eps())))),
      add(pow(sub(c(1), eps()), neg(var_n())), c(1)),
      min(eps(), c(0.25)),
  };
  for (const auto& e : exprs) {
    for (double ev : {0.5, 0.125, 0.01}) {
      double d = eval_d(e, at(ev, 3));
      double l = eval_lg(e, at(ev, 3)).to_double();
      CHECK(l == doctest::Approx(d).epsilon(1e-12));
    }
  }
}

TEST_CASE("log-space evaluation survives deep-grid magnitudes") {
  double deep = std::pow(2.0, -40);
  // exp(1/eps): double overflows, log stays finite
  auto g = exp(div(c(1), eps()));
  LogReal v = eval_lg(g, at(deep));
  CHECK(v.sgn == 1);
  CHECK(v.lg == doctest::Approx(std::pow(2.0, 40)));
  // ceil of a positive underflowed quantity is 1
  auto h = ceil(exp(neg(div(c(1), eps()))));
  CHECK(eval_lg(h, at(deep)).to_double() == 1.0);
}

TEST_CASE("partial sums respect the cap with a typed error") {
  Config tight;
  tight.sum_cap = 1000;
  auto body = c(1);
  auto s = partial_sum(body, c(0), intpart(div(c(1), eps())));
  EvalCtx ctx{1e-5, std::nullopt, std::nullopt, &tight};
  CHECK_THROWS_AS(eval_d(s, ctx), GridTooDeep);
  ctx.eps = 0.01;
  CHECK(eval_d(s, ctx) == 101.0);
}

TEST_CASE("window sums and checkpointed prefixes agree") {
  auto body = div(c(1), add(var_n(), c(1)));
  double direct = window_sum(body, 0.5, 3, 20, cfg);
  auto pref = prefix_sums_at(body, 0.5, 0, {2, 20}, cfg);
  CHECK(direct == doctest::Approx(pref[1] - pref[0]).epsilon(1e-14));
  CHECK(window_sum(body, 0.5, 5, 4, cfg) == 0.0);  // empty window
}

TEST_CASE("substitution extends sequences to hypernaturals") {
  auto body = pow(c(0.5), var_n());
  auto ext = subst_n(body, intpart(div(c(1), eps())));
  CHECK(!contains_n(ext));
  CHECK(eval_d(ext, at(0.125)) == doctest::Approx(std::pow(0.5, 8)));
  auto shifted = shift_n(body, 3);
  CHECK(eval_d(shifted, at(0.5, 2)) == doctest::Approx(std::pow(0.5, 5)));
}

TEST_CASE("structural equality and printing") {
  auto a = add(pow(eps(), c(2)), c(1));
  auto b = add(pow(eps(), c(2)), c(1));
  auto d = add(pow(eps(), c(3)), c(1));
  CHECK(equal(a, b));
  CHECK(!equal(a, d));
  CHECK(to_string(a) == "(pow(eps, 2) + 1)");
  auto p = piecewise(eps(), div(c(1), add(var_n(), c(1))), true, c(0), c(1));
  CHECK(to_string(p) == "pc(eps < (1 / (n + 1)), 0, 1)");
}
