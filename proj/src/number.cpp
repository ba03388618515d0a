#include "rcgn/number.hpp"

#include <algorithm>
#include <cmath>

#include "rcgn/parallel.hpp"

namespace rcgn {

bool gauge_equiv(const GaugePtr& a, const GaugePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->family() != b->family()) {
    // identity is pow(1)
    auto is_unit_power = [](const GaugePtr& g) {
      return g->family() == GaugeFamily::Identity ||
             (g->family() == GaugeFamily::Power && g->param() == 1.0);
    };
    return is_unit_power(a) && is_unit_power(b);
  }
  switch (a->family()) {
    case GaugeFamily::Identity: return true;
    case GaugeFamily::Power:
    case GaugeFamily::ExpInv: return a->param() == b->param();
    case GaugeFamily::LogLog: return gauge_equiv(a->base(), b->base());
    case GaugeFamily::Custom:
    case GaugeFamily::Derived:
      return a->net() && b->net() && equal(a->net(), b->net());
  }
  return false;
}

SampledNet sample_net(const ExprPtr& e, const Config& cfg, std::optional<long long> n,
                      std::optional<double> x) {
  auto pts = cfg.grid.points();
  const int count = static_cast<int>(pts.size());
  std::vector<LogReal> v(static_cast<size_t>(count));
  std::vector<char> ok(static_cast<size_t>(count), 0);
  par::for_each_index(count, cfg.parallel, [&](int k) {
    EvalCtx ctx{pts[static_cast<size_t>(k)], n, x, &cfg};
    try {
      v[static_cast<size_t>(k)] = eval_lg(e, ctx);
      ok[static_cast<size_t>(k)] = 1;
    } catch (const GridTooDeep&) {
      ok[static_cast<size_t>(k)] = 0;
    }
  });
  SampledNet s;
  s.v = std::move(v);
  s.k_last = -1;
  for (int k = 0; k < count && ok[static_cast<size_t>(k)]; ++k) s.k_last = k;
  return s;
}

std::vector<double> gauge_logs(const Gauge& rho, const Config& cfg) {
  auto pts = cfg.grid.points();
  std::vector<double> out(pts.size());
  for (size_t k = 0; k < pts.size(); ++k) out[k] = rho.log_value(pts[k]);
  return out;
}

namespace {

int min_tail(int feasible_count) { return std::max(4, feasible_count / 4); }

// first index from which pred(k) holds through k_last; -1 if none
template <class P>
int hold_from(int k_last, P&& pred) {
  int from = -1;
  for (int k = 0; k <= k_last; ++k) {
    if (pred(k)) {
      if (from < 0) from = k;
    } else {
      from = -1;
    }
  }
  return from;
}

template <class P>
bool fails_last3(int k_last, P&& pred) {
  if (k_last < 2) return false;
  for (int k = k_last - 2; k <= k_last; ++k)
    if (pred(k)) return false;
  return true;
}

// least-squares slope of y against x
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return den == 0 ? 0 : num / den;
}

struct SlopeFit {
  bool usable = false;
  double slope = 0;
  bool stable = false;
  bool increasing = false, decreasing = false;
};

SlopeFit fit_ratio(const SampledNet& s, const std::vector<double>& rho_lg, const Config& cfg) {
  SlopeFit f;
  int k1 = s.k_last;
  int w = std::min(cfg.slope_window, k1 + 1);
  if (w < 4) return f;
  std::vector<double> xs, ys, ratio;
  for (int k = k1 - w + 1; k <= k1; ++k) {
    const LogReal& lv = s.v[static_cast<size_t>(k)];
    if (lv.is_zero() || !std::isfinite(lv.lg)) return f;
    xs.push_back(rho_lg[static_cast<size_t>(k)]);
    ys.push_back(lv.lg);
    ratio.push_back(lv.lg / rho_lg[static_cast<size_t>(k)]);
  }
  f.usable = true;
  f.slope = ls_slope(xs, ys);
  size_t half = xs.size() / 2;
  double s1 = ls_slope({xs.begin(), xs.begin() + static_cast<long>(half)},
                       {ys.begin(), ys.begin() + static_cast<long>(half)});
  double s2 = ls_slope({xs.begin() + static_cast<long>(half), xs.end()},
                       {ys.begin() + static_cast<long>(half), ys.end()});
  f.stable = std::fabs(s1 - s2) <= cfg.slope_drift * std::max(1.0, std::fabs(f.slope));
  f.increasing = true;
  f.decreasing = true;
  for (size_t i = 1; i < ratio.size(); ++i) {
    if (ratio[i] <= ratio[i - 1]) f.increasing = false;
    if (ratio[i] >= ratio[i - 1]) f.decreasing = false;
  }
  return f;
}

bool all_zero(const SampledNet& s) {
  for (int k = 0; k <= s.k_last; ++k)
    if (!s.v[static_cast<size_t>(k)].is_zero()) return false;
  return true;
}

}  // namespace

Verdict moderate_of_samples(const SampledNet& s, const std::vector<double>& rho_lg,
                            const Config& cfg) {
  if (!s.feasible()) return Verdict::unknown_with("no feasible grid points");
  if (all_zero(s)) return Verdict::proven_with(0, 0, s.k_last, "identically zero");
  const int k1 = s.k_last;
  for (int Q = 0; Q <= cfg.Q_max; ++Q) {
    int from = hold_from(k1, [&](int k) {
      const LogReal& lv = s.v[static_cast<size_t>(k)];
      return lv.is_zero() || lv.lg <= -static_cast<double>(Q) * rho_lg[static_cast<size_t>(k)];
    });
    if (from >= 0 && k1 - from + 1 >= min_tail(k1 + 1))
      return Verdict::proven_with(Q, from, k1);
  }
  bool beyond = fails_last3(k1, [&](int k) {
    const LogReal& lv = s.v[static_cast<size_t>(k)];
    return lv.is_zero() || lv.lg <= -static_cast<double>(cfg.Q_max) * rho_lg[static_cast<size_t>(k)];
  });
  if (beyond) {
    bool saturated = true;
    for (int k = std::max(0, k1 - 2); k <= k1; ++k)
      saturated = saturated && std::isinf(s.v[static_cast<size_t>(k)].lg);
    if (saturated)
      return Verdict::refuted_with(cfg.Q_max, k1 - 2, k1, "overflow beyond double range");
    SlopeFit f = fit_ratio(s, rho_lg, cfg);
    if (f.usable && (f.decreasing || f.slope < -static_cast<double>(cfg.Q_max)))
      return Verdict::refuted_with(cfg.Q_max, k1 - 2, k1, "growth beyond Q_max with diverging trend");
  }
  return Verdict::unknown_with("no witness within Q_max");
}

Verdict negligible_of_samples(const SampledNet& s, const std::vector<double>& rho_lg,
                              const Config& cfg, const std::vector<double>* slack_lg) {
  if (!s.feasible()) return Verdict::unknown_with("no feasible grid points");
  if (all_zero(s)) return Verdict::proven_with(cfg.q_max, 0, s.k_last, "identically zero");
  const int k1 = s.k_last;
  auto bound = [&](int k, int q) {
    double b = static_cast<double>(q) * rho_lg[static_cast<size_t>(k)];
    if (slack_lg) b = std::max(b, (*slack_lg)[static_cast<size_t>(k)]);
    return b;
  };
  // each exponent level may certify from its own depth; require at least
  // min_tail points at the deepest level q_max and 3 points per level
  bool all_levels = true;
  int deepest_from = 0;
  for (int q = 1; q <= cfg.q_max && all_levels; ++q) {
    int from = hold_from(k1, [&](int k) {
      const LogReal& lv = s.v[static_cast<size_t>(k)];
      return lv.is_zero() || lv.lg <= bound(k, q);
    });
    int need = (q == cfg.q_max) ? std::max(3, (k1 + 1) / 4) : 3;
    if (from < 0 || k1 - from + 1 < need)
      all_levels = false;
    else
      deepest_from = std::max(deepest_from, from);
  }
  if (all_levels)
    return Verdict::proven_with(cfg.q_max, deepest_from, k1, "checked for all q <= q_max");
  for (int q = 0; q <= cfg.q_max; ++q) {
    bool fails = fails_last3(k1, [&](int k) {
      const LogReal& lv = s.v[static_cast<size_t>(k)];
      return lv.is_zero() || lv.lg <= bound(k, q);
    });
    if (fails) return Verdict::refuted_with(q, k1 - 2, k1, "persistent violation");
  }
  return Verdict::unknown_with("between rho^q levels without a stable trend");
}

ValuationResult valuation(const ExprPtr& x, const GaugePtr& rho, const Config& cfg) {
  if (auto sym = sym_valuation_of(x, *rho)) {
    switch (sym->kind) {
      case SymValuation::Finite: return ValuationResult{ValuationResult::Exact, sym->v, true};
      case SymValuation::PlusInf: return ValuationResult{ValuationResult::PlusInf, 0, true};
      case SymValuation::MinusInf: return ValuationResult{ValuationResult::MinusInf, 0, true};
    }
  }
  SampledNet s = sample_net(x, cfg);
  if (!s.feasible()) return ValuationResult{};
  auto rho_lg = gauge_logs(*rho, cfg);
  bool zero_tail = true;
  for (int k = std::max(0, s.k_last - cfg.slope_window + 1); k <= s.k_last; ++k)
    if (!s.v[static_cast<size_t>(k)].is_zero()) zero_tail = false;
  if (zero_tail) return ValuationResult{ValuationResult::PlusInf, 0, true};
  SlopeFit f = fit_ratio(s, rho_lg, cfg);
  if (!f.usable) return ValuationResult{};  // oscillating sign / no stable magnitude
  if (f.slope > cfg.q_max + 5 && f.increasing)
    return ValuationResult{ValuationResult::PlusInf, 0, f.stable};
  if (f.slope < -(cfg.Q_max + 5) && f.decreasing)
    return ValuationResult{ValuationResult::MinusInf, 0, f.stable};
  return ValuationResult{ValuationResult::Estimate, f.slope, f.stable};
}

namespace {

// scan Q downward-tolerant: try q0, q0+1, ... up to Q_max with grid tail check
Verdict certify_moderate_witness(const SampledNet& s, const std::vector<double>& rho_lg,
                                 const Config& cfg, int q0, const char* note) {
  const int k1 = s.k_last;
  for (int Q = std::max(0, q0); Q <= cfg.Q_max; ++Q) {
    int from = hold_from(k1, [&](int k) {
      const LogReal& lv = s.v[static_cast<size_t>(k)];
      return lv.is_zero() || lv.lg <= -static_cast<double>(Q) * rho_lg[static_cast<size_t>(k)];
    });
    if (from >= 0 && k1 - from + 1 >= min_tail(k1 + 1))
      return Verdict::proven_with(Q, from, k1, note);
  }
  return Verdict::unknown_with("symbolic witness not confirmed on grid");
}

}  // namespace

Verdict is_moderate(const ExprPtr& x, const GaugePtr& rho, const Config& cfg) {
  auto sym = sym_valuation_of(x, *rho);
  SampledNet s = sample_net(x, cfg);
  auto rho_lg = gauge_logs(*rho, cfg);
  if (sym) {
    switch (sym->kind) {
      case SymValuation::MinusInf: {
        int k1 = std::max(s.k_last, 2);
        return Verdict::refuted_with(0, std::max(0, k1 - 2), k1, "symbolic: valuation -inf");
      }
      case SymValuation::PlusInf:
        if (s.feasible()) return certify_moderate_witness(s, rho_lg, cfg, 0, "symbolic: negligible-like decay");
        return Verdict::proven_with(0, 0, -1, "symbolic: negligible-like decay");
      case SymValuation::Finite: {
        int q0 = static_cast<int>(std::ceil(-sym->v - 1e-9));
        if (s.feasible()) {
          Verdict v = certify_moderate_witness(s, rho_lg, cfg, q0, "symbolic valuation + grid witness");
          if (!v.unknown()) return v;
        }
        return Verdict::proven_with(std::max(0, q0), 0, -1, "symbolic valuation");
      }
    }
  }
  if (!s.feasible()) return Verdict::unknown_with("no feasible grid points");
  return moderate_of_samples(s, rho_lg, cfg);
}

Verdict is_negligible(const ExprPtr& x, const GaugePtr& rho, const Config& cfg) {
  auto sym = sym_valuation_of(x, *rho);
  SampledNet s = sample_net(x, cfg);
  auto rho_lg = gauge_logs(*rho, cfg);
  if (sym) {
    switch (sym->kind) {
      case SymValuation::PlusInf: {
        if (s.feasible()) {
          Verdict v = negligible_of_samples(s, rho_lg, cfg);
          if (v.proven()) {
            v.note = "symbolic: valuation +inf; grid-checked for q <= q_max";
            return v;
          }
        }
        return Verdict::proven_with(cfg.q_max, 0, s.k_last, "symbolic: valuation +inf");
      }
      case SymValuation::MinusInf:
        return Verdict::refuted_with(0, std::max(0, s.k_last - 2), s.k_last, "symbolic: valuation -inf");
      case SymValuation::Finite: {
        int q = static_cast<int>(std::floor(sym->v)) + 1;
        return Verdict::refuted_with(q, std::max(0, s.k_last - 2), s.k_last,
                                     "symbolic: finite valuation " + std::to_string(sym->v));
      }
    }
  }
  if (!s.feasible()) return Verdict::unknown_with("no feasible grid points");
  return negligible_of_samples(s, rho_lg, cfg);
}

// ---- generalized numbers ------------------------------------------------------

GeneralizedNumber gn(ExprPtr rep, GaugePtr gauge) { return GeneralizedNumber{std::move(rep), std::move(gauge)}; }
GeneralizedNumber gn_const(double v, GaugePtr gauge) { return gn(c(v), std::move(gauge)); }

namespace {
void need_same_gauge(const GeneralizedNumber& x, const GeneralizedNumber& y, const char* who) {
  if (!gauge_equiv(x.gauge, y.gauge))
    throw TypeError(std::string(who) + ": gauge mismatch (" + x.gauge->name() + " vs " +
                    y.gauge->name() + ")");
}
}  // namespace

GeneralizedNumber gn_add(const GeneralizedNumber& x, const GeneralizedNumber& y) {
  need_same_gauge(x, y, "gn_add");
  return gn(add(x.rep, y.rep), x.gauge);
}
GeneralizedNumber gn_sub(const GeneralizedNumber& x, const GeneralizedNumber& y) {
  need_same_gauge(x, y, "gn_sub");
  return gn(sub(x.rep, y.rep), x.gauge);
}
GeneralizedNumber gn_mul(const GeneralizedNumber& x, const GeneralizedNumber& y) {
  need_same_gauge(x, y, "gn_mul");
  return gn(mul(x.rep, y.rep), x.gauge);
}
GeneralizedNumber gn_neg(const GeneralizedNumber& x) { return gn(neg(x.rep), x.gauge); }
GeneralizedNumber gn_abs(const GeneralizedNumber& x) { return gn(abs(x.rep), x.gauge); }

const char* to_string(OrderVerdict::Rel r) {
  switch (r) {
    case OrderVerdict::EQ: return "EQ";
    case OrderVerdict::LT: return "LT";
    case OrderVerdict::LE: return "LE";
    case OrderVerdict::GT: return "GT";
    case OrderVerdict::GE: return "GE";
    case OrderVerdict::SubpointOnly: return "SubpointOnly";
    default: return "Unknown";
  }
}

OrderVerdict gn_compare(const GeneralizedNumber& x, const GeneralizedNumber& y,
                        const Config& cfg) {
  need_same_gauge(x, y, "gn_compare");
  OrderVerdict out;
  if (equal(x.rep, y.rep)) {
    out.rel = OrderVerdict::EQ;
    out.grid_to = cfg.grid.count - 1;
    out.note = "identical representatives";
    return out;
  }
  ExprPtr d = sub(y.rep, x.rep);
  SampledNet sd = sample_net(d, cfg);
  SampledNet sx = sample_net(x.rep, cfg);
  SampledNet sy = sample_net(y.rep, cfg);
  auto rho_lg = gauge_logs(*x.gauge, cfg);
  if (!sd.feasible()) {
    out.note = "difference not evaluable on the grid";
    return out;
  }
  int k1 = sd.k_last;
  // double-arithmetic equality floor, scaled by the operand magnitudes
  std::vector<double> slack(static_cast<size_t>(k1 + 1), std::log(cfg.fp_slack));
  for (int k = 0; k <= k1; ++k) {
    double scale = 0.0;
    if (k <= sx.k_last && !sx.v[static_cast<size_t>(k)].is_zero())
      scale = std::max(scale, sx.v[static_cast<size_t>(k)].lg);
    if (k <= sy.k_last && !sy.v[static_cast<size_t>(k)].is_zero())
      scale = std::max(scale, sy.v[static_cast<size_t>(k)].lg);
    slack[static_cast<size_t>(k)] = std::log(cfg.fp_slack) + scale;
  }

  // EQ: difference negligible (with the fp floor)
  {
    auto sym = sym_valuation_of(d, *x.gauge);
    if (sym && sym->kind == SymValuation::PlusInf) {
      out.rel = OrderVerdict::EQ;
      out.grid_to = k1;
      out.note = "symbolic: difference negligible";
      return out;
    }
    SampledNet sd_trim = sd;
    sd_trim.k_last = k1;
    Verdict nv = negligible_of_samples(sd_trim, rho_lg, cfg, &slack);
    if (nv.proven()) {
      out.rel = OrderVerdict::EQ;
      out.grid_from = nv.grid_from;
      out.grid_to = nv.grid_to;
      out.note = nv.note;
      return out;
    }
  }

  auto noise = [&](int k) {
    const LogReal& lv = sd.v[static_cast<size_t>(k)];
    return lv.is_zero() || lv.lg <= slack[static_cast<size_t>(k)];
  };

  // final constant-sign run of the difference (noise points do not break it)
  int sign_from = -1;
  int tail_sign = 0;
  for (int k = 0; k <= k1; ++k) {
    int sg = noise(k) ? 0 : sd.v[static_cast<size_t>(k)].sgn;
    if (sg == 0) continue;
    if (tail_sign == 0 || sg != tail_sign) {
      tail_sign = sg;
      sign_from = k;
    }
  }

  if (tail_sign != 0 && k1 - sign_from + 1 >= min_tail(k1 + 1)) {
    // strict witness search: |d| >= rho^q on the tail
    for (int q = 0; q <= cfg.q_max; ++q) {
      int from = hold_from(k1, [&](int k) {
        const LogReal& lv = sd.v[static_cast<size_t>(k)];
        return !lv.is_zero() && lv.sgn == tail_sign &&
               lv.lg >= static_cast<double>(q) * rho_lg[static_cast<size_t>(k)];
      });
      if (from >= 0 && k1 - from + 1 >= min_tail(k1 + 1)) {
        out.rel = tail_sign > 0 ? OrderVerdict::LT : OrderVerdict::GT;
        out.q = q;
        out.grid_from = from;
        out.grid_to = k1;
        return out;
      }
    }
    // non-strict: no sign violation above noise
    out.rel = tail_sign > 0 ? OrderVerdict::LE : OrderVerdict::GE;
    out.grid_from = sign_from;
    out.grid_to = k1;
    out.note = "no strict witness within q_max";
    return out;
  }

  // mixed persistent signs: subpoint verdict over the sampled grid
  std::vector<int> pos, neg;
  for (int k = 0; k <= k1; ++k) {
    if (noise(k)) continue;
    (sd.v[static_cast<size_t>(k)].sgn > 0 ? pos : neg).push_back(k);
  }
  if (!pos.empty() && !neg.empty()) {
    out.rel = OrderVerdict::SubpointOnly;
    out.pos_idx = std::move(pos);
    out.neg_idx = std::move(neg);
    out.grid_to = k1;
    out.note = "sign of the difference is not eventually constant";
    return out;
  }
  out.note = "no stable verdict";
  return out;
}

}  // namespace rcgn
