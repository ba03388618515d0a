#include "rcgn/sequence.hpp"

#include <algorithm>
#include <cmath>

#include "rcgn/parallel.hpp"

namespace rcgn {

HyperSequence make_sequence(ExprPtr rep, GaugePtr sigma, GaugePtr rho, long long start) {
  return HyperSequence{std::move(rep), std::move(sigma), std::move(rho), start, {}, {}};
}

HyperSequence seq_abs(const HyperSequence& a) {
  return make_sequence(abs(a.rep), a.sigma, a.rho, a.start);
}
HyperSequence seq_scale(const HyperSequence& a, const ExprPtr& factor) {
  return make_sequence(mul(factor, a.rep), a.sigma, a.rho, a.start);
}
HyperSequence seq_shift(const HyperSequence& a, long long k) {
  return make_sequence(shift_n(a.rep, k), a.sigma, a.rho, std::max(0LL, a.start - k));
}

std::vector<Probe> probe_family(const GaugePtr& sigma, const Config& cfg) {
  std::vector<Probe> out;
  for (long long k : {0LL, 1LL, 2LL, 5LL})
    out.push_back({"const " + std::to_string(k), hypernat_const(k, sigma)});
  for (int R = 1; R <= cfg.probe_R_max; ++R) {
    auto rep = intpart(pow(gauge_ref(sigma), c(-R)));
    out.push_back({"int(sigma^-" + std::to_string(R) + ")",
                   hypernat_from_net(rep, sigma, cfg)});
  }
  auto mixed = intpart(mul(pow(gauge_ref(sigma), c(-1)), neg(log(gauge_ref(sigma)))));
  out.push_back({"int(sigma^-1 log(1/sigma))", hypernat_from_net(mixed, sigma, cfg)});
  return out;
}

ExprPtr window_sum_net(const HyperSequence& a, ExprPtr from, ExprPtr to) {
  ExprPtr lo = a.start > 0 ? max(std::move(from), c(static_cast<double>(a.start))) : std::move(from);
  if (auto closed = closed_partial_sum(a.rep, lo, to)) return *closed;
  return partial_sum(a.rep, lo, to);
}

// ---- growth in n ---------------------------------------------------------------

namespace {

// eventual per-eps comparison of |k(eps)| against 1 over the grid tail:
// -1 below, +1 above, 0 equal, 2 mixed
int abs_vs_one(const ExprPtr& k, const Config& cfg) {
  auto pts = cfg.grid.points();
  int seen_lo = 0, seen_hi = 0, seen_eq = 0;
  for (double p : pts) {
    EvalCtx ctx{p, std::nullopt, std::nullopt, &cfg};
    LogReal v = eval_lg(k, ctx).abs();
    if (v.is_zero() || v.lg < -1e-12)
      ++seen_lo;
    else if (v.lg > 1e-12)
      ++seen_hi;
    else
      ++seen_eq;
  }
  if (seen_hi && seen_lo) return 2;
  if (seen_hi) return 1;
  if (seen_lo) return -1;
  return 0;
}

bool beta_nonzero_on_tail(const ExprPtr& beta, const Config& cfg) {
  auto pts = cfg.grid.points();
  int nz = 0;
  for (size_t k = pts.size() / 2; k < pts.size(); ++k) {
    EvalCtx ctx{pts[k], std::nullopt, std::nullopt, &cfg};
    if (!eval_lg(beta, ctx).is_zero()) ++nz;
  }
  return nz > 0;
}

}  // namespace

GrowthClass growth_in_n(const ExprPtr& rep, long long start, const Config& cfg) {
  SeqForm f = recognize_form(rep);
  switch (f.kind) {
    case SeqForm::Zero:
      return {GrowthClass::Decays, "zero"};
    case SeqForm::ConstInN:
      return {GrowthClass::Bounded, "constant in n"};
    case SeqForm::AlternatingUnit:
      return {GrowthClass::Bounded, "alternating unit"};
    case SeqForm::Geometric: {
      int v = abs_vs_one(f.base, cfg);
      if (v < 0) return {GrowthClass::Decays, "|base| < 1 pointwise"};
      if (v == 0) return {GrowthClass::Bounded, "|base| = 1 pointwise"};
      if (v == 1) return {GrowthClass::Grows, "|base| > 1 pointwise"};
      return {GrowthClass::Unknown, "|base| vs 1 mixed across the grid"};
    }
    case SeqForm::Exponential:
      return {GrowthClass::Decays, "x^n/n! vanishes for every x"};
    case SeqForm::PolyLinear:
      if (beta_nonzero_on_tail(f.beta, cfg)) return {GrowthClass::Grows, "linear in n"};
      return {GrowthClass::Bounded, "degenerate linear term"};
    case SeqForm::PowerLaw:
      if (f.p > 0) return {GrowthClass::Decays, "negative power of n"};
      return {GrowthClass::Grows, "positive power of n"};
    case SeqForm::AltFactor: {
      GrowthClass g = growth_in_n(f.inner, start, cfg);
      g.why = "alternating times: " + g.why;
      return g;
    }
    case SeqForm::ConvGeomGeom: {
      int v = abs_vs_one(f.base, cfg);
      if (v < 0) return {GrowthClass::Decays, "(n+1) |base|^n with |base| < 1"};
      return {GrowthClass::Grows, "(n+1) |base|^n with |base| >= 1"};
    }
    case SeqForm::ConvExpExp:
      return {GrowthClass::Decays, "exponential convolution"};
    default:
      break;
  }
  // piecewise with an n-dependent condition: resolve the branch active for
  // large n (the paper's representatives settle on one branch per eps)
  if (rep->op == Op::Piecewise) {
    auto pts = cfg.grid.points();
    int branch = -1;
    bool stable = true;
    for (size_t k = 0; k < pts.size() && stable; k += 5) {
      // n large relative to 1/eps, so eps-threshold conditions have settled
      double big = std::fmin(9.0e15, std::fmax(static_cast<double>(cfg.n_cap), 4.0 / pts[k]));
      for (double nd : {big, 2 * big, 4 * big}) {
        long long n = static_cast<long long>(std::fmin(nd, 9.0e15));
        EvalCtx ctx{pts[k], n, std::nullopt, &cfg};
        LogReal l = eval_lg(rep->kids[0], ctx), r = eval_lg(rep->kids[1], ctx);
        bool cond = rep->strict ? (l < r) : (l <= r);
        int b = cond ? 0 : 1;
        if (branch < 0)
          branch = b;
        else if (branch != b)
          stable = false;
      }
    }
    if (stable && branch >= 0) {
      GrowthClass g = growth_in_n(rep->kids[branch == 0 ? 2 : 3], start, cfg);
      g.why = "piecewise tail branch: " + g.why;
      return g;
    }
    return {GrowthClass::Unknown, "piecewise branch does not settle"};
  }
  if (rep->op == Op::Min || rep->op == Op::Max) {
    GrowthClass a = growth_in_n(rep->kids[0], start, cfg);
    GrowthClass b = growth_in_n(rep->kids[1], start, cfg);
    if (a.kind == b.kind) return a;
    return {GrowthClass::Unknown, "min/max of mixed growth classes"};
  }
  if (rep->op == Op::Add || rep->op == Op::Sub || rep->op == Op::Neg || rep->op == Op::Abs) {
    GrowthClass a = growth_in_n(rep->kids[0], start, cfg);
    if (rep->op == Op::Neg || rep->op == Op::Abs) return a;
    GrowthClass b = growth_in_n(rep->kids[1], start, cfg);
    if (a.kind == GrowthClass::Unknown || b.kind == GrowthClass::Unknown)
      return {GrowthClass::Unknown, "sum with an unresolved term"};
    if (a.kind == GrowthClass::Grows && b.kind == GrowthClass::Grows)
      return {GrowthClass::Unknown, "two growing terms may cancel"};
    if (a.kind == GrowthClass::Grows || b.kind == GrowthClass::Grows)
      return {GrowthClass::Grows, "dominant growing term"};
    if (a.kind == GrowthClass::Bounded || b.kind == GrowthClass::Bounded)
      return {GrowthClass::Bounded, "sum of bounded terms"};
    return {GrowthClass::Decays, "sum of vanishing terms"};
  }
  return {GrowthClass::Unknown, "outside the recognized grammar"};
}

// ---- probe prefix sums ----------------------------------------------------------

namespace {

// prefix sums at probe window boundaries, one compensated pass per grid
// point: at_ni[k][p] = sum_{n=start}^{ni(P_p)}, before[k][p] the same up to
// ni(P_p) - 1; nullopt when the probe is beyond the cap at that point
struct PrefixTable {
  std::vector<std::vector<std::optional<double>>> at_ni, before;
};

PrefixTable probe_prefix_sums(const HyperSequence& a, const std::vector<Probe>& probes,
                              const Config& cfg) {
  auto pts = cfg.grid.points();
  const int count = static_cast<int>(pts.size());
  PrefixTable out;
  out.at_ni.assign(static_cast<size_t>(count),
                   std::vector<std::optional<double>>(probes.size()));
  out.before = out.at_ni;
  par::for_each_index(count, cfg.parallel, [&](int k) {
    double ev = pts[static_cast<size_t>(k)];
    std::vector<std::pair<long long, std::pair<size_t, bool>>> targets;  // (n, (p, is_before))
    for (size_t p = 0; p < probes.size(); ++p) {
      double niv = ni(probes[p].N, ev);
      if (niv > static_cast<double>(cfg.sum_cap)) continue;  // infeasible here
      auto n = static_cast<long long>(niv);
      targets.push_back({n, {p, false}});
      targets.push_back({n - 1, {p, true}});
    }
    std::sort(targets.begin(), targets.end());
    std::vector<long long> ts;
    ts.reserve(targets.size());
    for (auto& t : targets) ts.push_back(t.first);
    std::vector<double> sums;
    try {
      sums = prefix_sums_at(a.rep, ev, a.start, ts, cfg);
    } catch (const GridTooDeep&) {
      return;
    }
    for (size_t i = 0; i < targets.size(); ++i) {
      auto [p, is_before] = targets[i].second;
      (is_before ? out.before : out.at_ni)[static_cast<size_t>(k)][p] = sums[i];
    }
  });
  return out;
}

SampledNet column(const PrefixTable& table, size_t p) {
  SampledNet s;
  s.v.resize(table.at_ni.size(), LogReal::zero());
  s.k_last = -1;
  for (size_t k = 0; k < table.at_ni.size(); ++k) {
    if (!table.at_ni[k][p]) break;
    s.v[k] = LogReal::from_double(*table.at_ni[k][p]);
    s.k_last = static_cast<int>(k);
  }
  return s;
}

void need_same_pair(const HyperSequence& a, const HyperSequence& b, const char* who) {
  if (!gauge_equiv(a.sigma, b.sigma) || !gauge_equiv(a.rho, b.rho))
    throw TypeError(std::string(who) + ": gauge pair mismatch");
  if (a.start != b.start)
    throw TypeError(std::string(who) + ": sequences start at different indices");
}

}  // namespace

SampledNet sweep_sup_samples(const ExprPtr& rep, long long start, const Config& cfg);

Verdict is_moderate_over_hypersums(HyperSequence& a, const Config& cfg) {
  if (a.mod_hyp) return *a.mod_hyp;

  // absolute-summability shortcut, valid for every gauge sigma: each
  // hypersum is bounded by sum |a_n|, itself below head + |limit| + bound
  if (auto tba = tail_bound(abs(a.rep), a.start, a.rho, cfg)) {
    ExprPtr rep = a.rep;
    long long start = a.start;
    Config cc = cfg;
    auto tb_copy = *tba;
    auto abs_dom = closure_net("abs_series_bound", [rep, start, cc, tb_copy](double ev) {
      double n0 = std::fmin(tb_copy.threshold(ev) + 8, 100000.0);
      EvalCtx ctx{ev, std::nullopt, std::nullopt, &cc};
      double head = 0;
      for (long long n = start; n <= static_cast<long long>(n0); ++n) {
        ctx.n = n;
        head += std::fabs(eval_d(rep, ctx));
      }
      LogReal lim = eval_lg(tb_copy.limit, ctx).abs();
      LogReal b = tb_copy.bound_lg(ev, n0);
      return LogReal::from_double(head) + lim + b.abs();
    });
    Verdict v = is_moderate(abs_dom, a.rho, cfg);
    if (v.proven()) {
      v.note = "absolutely summable: hypersums dominated by the absolute series";
      a.mod_hyp = v;
      return v;
    }
  }

  auto probes = probe_family(a.sigma, cfg);
  bool closed_route = closed_partial_sum(a.rep, c(0), c(1)).has_value();
  long long worst_q = 0;
  Verdict result = Verdict::proven_with(0, 0, cfg.grid.count - 1);
  bool any_unknown = false;

  if (closed_route) {
    for (const auto& p : probes) {
      ExprPtr s_net = window_sum_net(a, c(static_cast<double>(a.start)), p.N.rep);
      Verdict v = is_moderate(s_net, a.rho, cfg);
      if (v.refuted()) {
        v.note = "hypersum at probe " + p.label + " is not rho-moderate";
        a.mod_hyp = v;
        return v;
      }
      if (v.unknown()) any_unknown = true;
      worst_q = std::max(worst_q, v.witness.value_or(0));
      result.grid_from = std::max(result.grid_from, v.grid_from);
    }
  } else {
    auto table = probe_prefix_sums(a, probes, cfg);
    auto rho_lg = gauge_logs(*a.rho, cfg);
    for (size_t p = 0; p < probes.size(); ++p) {
      SampledNet s = column(table, p);
      if (!s.feasible()) {
        any_unknown = true;
        continue;
      }
      Verdict v = moderate_of_samples(s, rho_lg, cfg);
      if (v.refuted()) {
        v.note = "hypersum at probe " + probes[p].label + " is not rho-moderate";
        a.mod_hyp = v;
        return v;
      }
      if (v.unknown()) any_unknown = true;
      worst_q = std::max(worst_q, v.witness.value_or(0));
      result.grid_from = std::max(result.grid_from, v.grid_from);
    }
  }
  if (any_unknown) {
    result = Verdict::unknown_with("some probe sums stayed undecided");
  } else {
    result.witness = worst_q;
    result.note = "all probe hypersums rho-moderate";
  }
  a.mod_hyp = result;
  return result;
}

Verdict are_equivalent(const HyperSequence& a, const HyperSequence& b, const Config& cfg) {
  need_same_pair(a, b, "are_equivalent");
  if (equal(a.rep, b.rep))
    return Verdict::proven_with(cfg.q_max, 0, cfg.grid.count - 1, "identical representatives");
  auto probes = probe_family(a.sigma, cfg);
  auto rho_lg = gauge_logs(*a.rho, cfg);

  // termwise-uniform route: |sum_{N}^{M}(a-b)| <= (ni(M)+1) sup_n |a_n - b_n|
  {
    GrowthClass ga = growth_in_n(a.rep, a.start, cfg);
    GrowthClass gb = growth_in_n(b.rep, b.start, cfg);
    bool tame = (ga.kind == GrowthClass::Decays || ga.kind == GrowthClass::Bounded) &&
                (gb.kind == GrowthClass::Decays || gb.kind == GrowthClass::Bounded);
    if (tame) {
      GaugeRelation rel = compare_gauges(a.sigma, a.rho, cfg);
      if (rel.ge_star.proven()) {
        SampledNet sup = sweep_sup_samples(sub(a.rep, b.rep), a.start, cfg);
        auto pts = cfg.grid.points();
        SampledNet scaled = sup;
        for (int k = 0; k <= scaled.k_last; ++k) {
          double count_lg =
              std::log1p(std::exp(std::fmin(700.0, -cfg.probe_R_max *
                                                       a.sigma->log_value(pts[static_cast<size_t>(k)]))));
          if (!scaled.v[static_cast<size_t>(k)].is_zero())
            scaled.v[static_cast<size_t>(k)].lg += count_lg;
        }
        Verdict u = negligible_of_samples(scaled, rho_lg, cfg);
        if (u.proven()) {
          u.note = "termwise-uniform route: (ni+1) sup|a-b| negligible";
          return u;
        }
      }
    }
  }

  bool closed_a = closed_partial_sum(a.rep, c(0), c(1)).has_value();
  bool closed_b = closed_partial_sum(b.rep, c(0), c(1)).has_value();

  Verdict result = Verdict::proven_with(cfg.q_max, 0, cfg.grid.count - 1, "all probe windows negligible");
  bool any_unknown = false;

  auto judge = [&](const SampledNet& w, const std::string& label,
                   const std::vector<double>* slack) -> bool {
    Verdict v = negligible_of_samples(w, rho_lg, cfg, slack);
    if (v.refuted()) {
      v.note = "window " + label + " is not rho-negligible";
      result = v;
      return false;
    }
    if (v.unknown()) any_unknown = true;
    result.grid_from = std::max(result.grid_from, v.grid_from);
    return true;
  };

  if (closed_a && closed_b) {
    for (const auto& pn : probes)
      for (const auto& pm : probes) {
        ExprPtr wa = window_sum_net(a, pn.N.rep, pm.N.rep);
        ExprPtr wb = window_sum_net(b, pn.N.rep, pm.N.rep);
        ExprPtr d = sub(wa, wb);
        // magnitude scale of the windows sets the double-arithmetic floor
        SampledNet sd = sample_net(d, cfg);
        SampledNet sa = sample_net(wa, cfg), sb = sample_net(wb, cfg);
        if (!sd.feasible()) {
          any_unknown = true;
          continue;
        }
        std::vector<double> slack(sd.v.size(), std::log(cfg.fp_slack));
        for (int k = 0; k <= sd.k_last; ++k) {
          double scale = 0;
          if (k <= sa.k_last && !sa.v[static_cast<size_t>(k)].is_zero())
            scale = std::max(scale, sa.v[static_cast<size_t>(k)].lg);
          if (k <= sb.k_last && !sb.v[static_cast<size_t>(k)].is_zero())
            scale = std::max(scale, sb.v[static_cast<size_t>(k)].lg);
          slack[static_cast<size_t>(k)] = std::log(cfg.fp_slack) + scale;
        }
        if (!judge(sd, pn.label + ".." + pm.label, &slack)) return result;
      }
  } else {
    auto ta = probe_prefix_sums(a, probes, cfg);
    auto tb = probe_prefix_sums(b, probes, cfg);
    auto pts = cfg.grid.points();
    for (size_t pn = 0; pn < probes.size(); ++pn)
      for (size_t pm = 0; pm < probes.size(); ++pm) {
        SampledNet w;
        w.v.resize(pts.size(), LogReal::zero());
        w.k_last = -1;
        std::vector<double> slack(pts.size(), std::log(cfg.fp_slack));
        for (size_t k = 0; k < pts.size(); ++k) {
          if (!ta.at_ni[k][pm] || !tb.at_ni[k][pm] || !ta.before[k][pn] || !tb.before[k][pn])
            break;
          double from_n = ni(probes[pn].N, pts[k]);
          double to_m = ni(probes[pm].N, pts[k]);
          double wa = 0, wb = 0;
          if (to_m >= from_n) {  // empty windows contribute 0
            wa = *ta.at_ni[k][pm] - *ta.before[k][pn];
            wb = *tb.at_ni[k][pm] - *tb.before[k][pn];
          }
          double scale = std::max({1.0, std::fabs(*ta.at_ni[k][pm]), std::fabs(*tb.at_ni[k][pm])});
          slack[k] = std::log(cfg.fp_slack * scale);
          w.v[k] = LogReal::from_double(wa - wb);
          w.k_last = static_cast<int>(k);
        }
        if (!w.feasible()) {
          any_unknown = true;
          continue;
        }
        if (!judge(w, probes[pn].label + ".." + probes[pm].label, &slack)) return result;
      }
  }
  if (any_unknown && result.proven())
    return Verdict::unknown_with("some probe windows stayed undecided");
  return result;
}

// sampled sup over n of |rep(n, eps)| per grid point: a dense head plus
// geometric strides up to n_cap
SampledNet sweep_sup_samples(const ExprPtr& rep, long long start, const Config& cfg) {
  std::vector<long long> ns;
  for (long long n = start; n < start + 256; ++n) ns.push_back(n);
  for (long long n = start + 256; n <= start + cfg.n_cap; n = n * 2) ns.push_back(n);
  auto pts = cfg.grid.points();
  SampledNet sup;
  sup.v.resize(pts.size(), LogReal::zero());
  sup.k_last = static_cast<int>(pts.size()) - 1;
  std::vector<char> bad(pts.size(), 0);
  par::for_each_index(static_cast<int>(pts.size()), cfg.parallel, [&](int k) {
    double ev = pts[static_cast<size_t>(k)];
    // eps-threshold conditions flip around n ~ 1/eps; sample across the flip
    std::vector<long long> local = ns;
    double inv = 1.0 / ev;
    for (double cand : {inv - 1, inv, inv + 1, 2 * inv, 4 * inv}) {
      if (cand >= static_cast<double>(start) && cand < 9.0e15)
        local.push_back(static_cast<long long>(std::ceil(cand)));
    }
    LogReal m = LogReal::zero();
    for (long long n : local) {
      EvalCtx ctx{ev, n, std::nullopt, &cfg};
      try {
        LogReal v = eval_lg(rep, ctx).abs();
        if (cmp(v, m) > 0) m = v;
      } catch (const GridTooDeep&) {
        bad[static_cast<size_t>(k)] = 1;
        return;
      }
    }
    sup.v[static_cast<size_t>(k)] = m;
  });
  for (size_t k = 0; k < pts.size(); ++k)
    if (bad[k]) sup.k_last = std::min(sup.k_last, static_cast<int>(k) - 1);
  return sup;
}

Verdict is_uniformly_moderate(HyperSequence& a, const Config& cfg) {
  if (a.unif_mod) return *a.unif_mod;
  GrowthClass g = growth_in_n(a.rep, a.start, cfg);
  if (g.kind == GrowthClass::Grows) {
    Verdict v = Verdict::refuted_with(cfg.Q_max, 0, cfg.grid.count - 1,
                                      "sup over n is infinite per eps: " + g.why);
    a.unif_mod = v;
    return v;
  }
  SampledNet sup = sweep_sup_samples(a.rep, a.start, cfg);
  auto rho_lg = gauge_logs(*a.rho, cfg);
  Verdict v = moderate_of_samples(sup, rho_lg, cfg);
  if (v.proven()) {
    v.note = (g.kind == GrowthClass::Unknown)
                 ? "sampled sweep only (n <= n_cap); growth in n unresolved"
                 : "sup bounded by form analysis (" + g.why + "); witness from sweep";
    if (g.kind == GrowthClass::Unknown) v.truth = Truth::Unknown;
  }
  a.unif_mod = v;
  return v;
}

HyperSequence lambda_embed(const HyperSequence& a, const GaugeRelation& rel, const Config& cfg) {
  if (!rel.ge_star.proven())
    throw TypeError("lambda_embed: missing sigma >= rho* certificate");
  HyperSequence b = a;
  if (!b.unif_mod) is_uniformly_moderate(b, cfg);
  if (!b.unif_mod->proven())
    throw TypeError("lambda_embed: sequence is not uniformly moderate (" +
                    std::string(to_string(b.unif_mod->truth)) + ")");
  long long Q = b.unif_mod->witness.value_or(0);
  long long Qsr = rel.ge_star.witness.value_or(1);
  long long witness = cfg.probe_R_max * Qsr + Q;
  b.mod_hyp = Verdict::proven_with(witness, rel.ge_star.grid_from, cfg.grid.count - 1,
                                   "lambda embedding: witness R Q_sr + Q");
  return b;
}

GeneralizedNumber extend_to_hypernat(const HyperSequence& a, const HyperNatural& N,
                                     const Config& cfg) {
  (void)cfg;
  if (!a.mod_hyp || !a.mod_hyp->proven())
    throw TypeError("extend_to_hypernat: sequence not classified in the hyperseries space");
  ExprPtr idx = a.start > 0 ? max(N.rep, c(static_cast<double>(a.start))) : N.rep;
  return gn(subst_n(a.rep, idx), a.rho);
}

HyperSequence from_bounded_sequence(const std::vector<GeneralizedNumber>& values,
                                    const GeneralizedNumber& bound, GaugePtr sigma,
                                    const Config& cfg) {
  if (values.empty()) throw TypeError("from_bounded_sequence: empty value list");
  GaugePtr rho = bound.gauge;
  auto pts = cfg.grid.points();
  std::vector<ExprPtr> reps;
  std::vector<double> thresholds;
  for (size_t n = 0; n < values.size(); ++n) {
    if (!gauge_equiv(values[n].gauge, rho))
      throw TypeError("from_bounded_sequence: gauge mismatch at n=" + std::to_string(n));
    OrderVerdict v = gn_compare(gn_abs(values[n]), bound, cfg);
    if (!v.le_like())
      throw TypeError("from_bounded_sequence: bound violation at n=" + std::to_string(n) +
                      " (" + to_string(v.rel) + ")");
    reps.push_back(values[n].rep);
    thresholds.push_back(pts[static_cast<size_t>(std::max(0, v.grid_from))]);
  }
  HyperSequence s = make_sequence(patched_seq(std::move(reps), std::move(thresholds), bound.rep),
                                  std::move(sigma), rho, 0);
  is_uniformly_moderate(s, cfg);
  return s;
}

}  // namespace rcgn
