#include "rcgn/hypernat.hpp"

#include <cmath>

namespace rcgn {

HyperNatural hypernat_from_net(ExprPtr x, GaugePtr sigma, const Config& cfg) {
  auto pts = cfg.grid.points();
  for (double e : pts) {
    EvalCtx ctx{e, std::nullopt, std::nullopt, &cfg};
    LogReal v = eval_lg(x, ctx);
    if (v.sgn < 0) throw TypeError("hypernat: negative value at eps=" + std::to_string(e));
    double d = v.to_double();
    if (d < 9.0e15 && std::nearbyint(d) != d) {
      // integer noise through the log representation is tolerated, real
      // fractions are not
      if (std::fabs(d - std::nearbyint(d)) > 1e-9 * std::fmax(1.0, std::fabs(d)))
        throw TypeError("hypernat: non-integer value " + std::to_string(d) + " at eps=" +
                        std::to_string(e));
    }
  }
  Verdict mod = is_moderate(x, sigma, cfg);
  if (!mod.proven())
    throw TypeError("hypernat: representative is not sigma-moderate (" +
                    std::string(to_string(mod.truth)) + ")");
  return HyperNatural{std::move(x), std::move(sigma), mod.witness.value_or(0)};
}

HyperNatural hypernat_const(long long k, GaugePtr sigma) {
  if (k < 0) throw TypeError("hypernat: negative constant");
  return HyperNatural{c(static_cast<double>(k)), std::move(sigma), 0};
}

double ni(const HyperNatural& N, double eps_v) {
  EvalCtx ctx{eps_v, std::nullopt, std::nullopt, nullptr};
  LogReal v = eval_lg(N.rep, ctx);
  double d = v.to_double();
  if (d < 9.0e15) d = std::nearbyint(d);
  return d < 0 ? 0.0 : d;
}

LogReal ni_lg(const HyperNatural& N, double eps_v) {
  EvalCtx ctx{eps_v, std::nullopt, std::nullopt, nullptr};
  LogReal v = eval_lg(N.rep, ctx);
  if (v.sgn > 0 && v.lg < 36.8)  // snap integer noise from the log representation
    return LogReal::from_double(std::nearbyint(v.to_double()));
  return v;
}

HyperNatural hypernat_add(const HyperNatural& a, const HyperNatural& b) {
  if (!gauge_equiv(a.sigma, b.sigma)) throw TypeError("hypernat_add: gauge mismatch");
  return HyperNatural{add(a.rep, b.rep), a.sigma, std::max(a.R, b.R) + 1};
}

HyperNatural hypernat_add_const(const HyperNatural& a, long long k) {
  return HyperNatural{add(a.rep, c(static_cast<double>(k))), a.sigma, a.R};
}

}  // namespace rcgn
