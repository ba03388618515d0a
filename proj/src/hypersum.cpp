#include "rcgn/hypersum.hpp"

#include <algorithm>
#include <cmath>

#include "rcgn/parallel.hpp"

namespace rcgn {

const char* to_string(HyperseriesResult::Status s) {
  switch (s) {
    case HyperseriesResult::Converges: return "Converges";
    case HyperseriesResult::DivergesPlus: return "DivergesPlus";
    case HyperseriesResult::DivergesMinus: return "DivergesMinus";
    default: return "NoVerdict";
  }
}

GeneralizedNumber hypersum(HyperSequence& a, const HyperNatural& N, const HyperNatural& M,
                           const Config& cfg) {
  if (!gauge_equiv(N.sigma, a.sigma) || !gauge_equiv(M.sigma, a.sigma))
    throw TypeError("hypersum: bounds live over a different gauge");
  Verdict cls = is_moderate_over_hypersums(a, cfg);
  if (!cls.proven())
    throw TypeError("hypersum: unclassified sequence (moderate over hypersums: " +
                    std::string(to_string(cls.truth)) + ")");
  ExprPtr lo = a.start > 0 ? max(N.rep, c(static_cast<double>(a.start))) : N.rep;
  return gn(partial_sum(a.rep, lo, M.rep), a.rho);
}

namespace {

// per-grid sums of a at the probe boundaries (direct, cap-guarded)
std::vector<std::vector<std::optional<double>>> direct_probe_sums(
    const HyperSequence& a, const std::vector<Probe>& probes, const Config& cfg) {
  auto pts = cfg.grid.points();
  const int count = static_cast<int>(pts.size());
  std::vector<std::vector<std::optional<double>>> out(
      static_cast<size_t>(count), std::vector<std::optional<double>>(probes.size()));
  par::for_each_index(count, cfg.parallel, [&](int k) {
    double ev = pts[static_cast<size_t>(k)];
    std::vector<std::pair<long long, size_t>> targets;
    for (size_t p = 0; p < probes.size(); ++p) {
      double niv = ni(probes[p].N, ev);
      if (niv > static_cast<double>(cfg.sum_cap)) continue;
      targets.emplace_back(static_cast<long long>(niv), p);
    }
    std::sort(targets.begin(), targets.end());
    std::vector<long long> ts;
    for (auto& t : targets) ts.push_back(t.first);
    std::vector<double> sums;
    try {
      sums = prefix_sums_at(a.rep, ev, a.start, ts, cfg);
    } catch (const GridTooDeep&) {
      return;
    }
    for (size_t i = 0; i < targets.size(); ++i)
      out[static_cast<size_t>(k)][targets[i].second] = sums[i];
  });
  return out;
}

struct VerifyOutcome {
  bool ok = false;
  int from = 0, to = -1;
  std::string route;
  std::string why;
};

// check |S_N - s| < rho^q for N = M_q and every probe N >= M_q
VerifyOutcome verify_level(const HyperSequence& a, const std::optional<TailBound>& tb,
                           const ExprPtr& s_rep, int q, const HyperNatural& M,
                           const std::vector<Probe>& probes,
                           const std::vector<std::vector<std::optional<double>>>* direct,
                           const Config& cfg) {
  auto pts = cfg.grid.points();
  auto rho_lg = gauge_logs(*a.rho, cfg);
  VerifyOutcome out;
  if (tb) {
    out.route = "closed-form bound";
    int checked = 0;
    for (size_t k = 0; k < pts.size(); ++k) {
      double ev = pts[k];
      double target = q * rho_lg[k];
      double nM = ni_lg(M, ev).to_double();
      double thr = tb->threshold(ev);
      auto check_at = [&](double N) {
        if (!std::isfinite(N)) return true;  // the bound vanishes in the limit
        LogReal b = tb->bound_lg(ev, N);
        return b.sgn == 0 || b.lg < target;
      };
      double first = std::fmax(nM, thr);
      if (!check_at(first)) {
        out.why = "bound fails at N = M_q, eps index " + std::to_string(k);
        return out;
      }
      ++checked;
      for (const auto& p : probes) {
        double nP = ni(p.N, ev);
        if (nP >= first && !check_at(nP)) {
          out.why = "bound fails at probe " + p.label + ", eps index " + std::to_string(k);
          return out;
        }
      }
    }
    out.ok = checked >= cfg.grid.count;
    out.from = 0;
    out.to = cfg.grid.count - 1;
    return out;
  }
  // direct route: double-resolution limited
  out.route = "direct";
  if (!direct) {
    out.why = "no bound and no direct sums";
    return out;
  }
  int applicable = 0;
  int from = -1, to = -1;
  for (size_t k = 0; k < pts.size(); ++k) {
    double ev = pts[k];
    double target = q * rho_lg[k];
    LogReal sv;
    try {
      sv = eval_lg(s_rep, EvalCtx{ev, std::nullopt, std::nullopt, &cfg});
    } catch (const GridTooDeep&) {
      continue;
    }
    double nM = ni_lg(M, ev).to_double();
    for (size_t p = 0; p < probes.size(); ++p) {
      double nP = ni(probes[p].N, ev);
      if (!(nP >= nM)) continue;
      if (!(*direct)[k][p]) continue;
      double S = *(*direct)[k][p];
      double scale = std::fmax(std::fabs(S), std::fabs(sv.to_double()));
      if (target <= std::log(cfg.fp_slack * std::fmax(scale, 1.0)))
        continue;  // below double resolution at this depth
      LogReal diff = LogReal::from_double(S) - sv;
      if (!(diff.is_zero() || diff.lg < target)) {
        out.why = "direct check fails at probe " + probes[p].label + ", eps index " +
                  std::to_string(k);
        return out;
      }
      ++applicable;
      if (from < 0) from = static_cast<int>(k);
      to = static_cast<int>(k);
    }
  }
  if (applicable >= 3) {
    out.ok = true;
    out.from = std::max(0, from);
    out.to = to;
  } else {
    out.why = "not enough grid points within double resolution";
  }
  return out;
}

// sampled termwise nonnegativity over the grid tail
bool terms_nonnegative(const HyperSequence& a, const Config& cfg) {
  auto pts = cfg.grid.points();
  for (size_t k = pts.size() / 2; k < pts.size(); k += 3) {
    for (long long n = a.start; n < a.start + 48; ++n) {
      EvalCtx ctx{pts[k], n, std::nullopt, &cfg};
      LogReal v = eval_lg(a.rep, ctx);
      if (v.sgn < 0 && v.lg > cfg.q_max * a.rho->log_value(pts[k])) return false;
    }
  }
  return true;
}

// partial sums at probes int(sigma^-R): closed form when possible, else
// direct; returns samples with feasibility prefix
SampledNet sums_at_R_probe(const HyperSequence& a, int R, const Config& cfg) {
  auto probe_rep = intpart(pow(gauge_ref(a.sigma), c(-R)));
  ExprPtr s_net = window_sum_net(a, c(static_cast<double>(a.start)), probe_rep);
  return sample_net(s_net, cfg);
}

}  // namespace

HyperseriesResult hyperseries_sum(HyperSequence& a, std::optional<GeneralizedNumber> candidate,
                                  const Config& cfg) {
  HyperseriesResult res;
  Verdict cls = is_moderate_over_hypersums(a, cfg);
  auto rho_lg = gauge_logs(*a.rho, cfg);
  auto pts = cfg.grid.points();

  if (!cls.proven()) {
    res.status = HyperseriesResult::NoVerdict;
    res.evidence.push_back("not moderate over hypersums: " + cls.note);
    // growth evidence at escalating probes
    for (int R = 1; R <= cfg.probe_R_max; ++R) {
      SampledNet s = sums_at_R_probe(a, R, cfg);
      if (!s.feasible()) continue;
      int k = s.k_last;
      const LogReal& v = s.v[static_cast<size_t>(k)];
      if (!v.is_zero() && v.lg > -cfg.q_div * rho_lg[static_cast<size_t>(k)])
        res.evidence.push_back("partial sum at int(sigma^-" + std::to_string(R) +
                               ") exceeds rho^-" + std::to_string(cfg.q_div) +
                               " at eps index " + std::to_string(k));
    }
    return res;
  }

  auto tb = tail_bound(a.rep, a.start, a.rho, cfg);
  std::optional<std::vector<std::vector<std::optional<double>>>> direct;
  auto probes = probe_family(a.sigma, cfg);

  // the limit to certify against
  ExprPtr s_rep;
  std::string sum_note;
  if (candidate) {
    if (!gauge_equiv(candidate->gauge, a.rho))
      throw TypeError("hyperseries_sum: candidate over a different gauge");
    s_rep = candidate->rep;
    if (tb) {
      OrderVerdict eqv = gn_compare(*candidate, gn(tb->limit, a.rho), cfg);
      if (!eqv.is(OrderVerdict::EQ)) {
        res.status = HyperseriesResult::NoVerdict;
        res.evidence.push_back("candidate is not EQ to the certified limit (" +
                               std::string(to_string(eqv.rel)) + ")");
        return res;
      }
      sum_note = "candidate EQ certified limit";
    }
  } else if (tb) {
    s_rep = tb->limit;
  } else {
    // propose from the deepest feasible probe sums
    direct = direct_probe_sums(a, probes, cfg);
    ExprPtr self = a.rep;
    long long start = a.start;
    Config cc = cfg;
    GaugePtr sig = a.sigma;
    s_rep = closure_net("proposed_sum", [self, start, cc, sig](double ev) {
      double best = 0;
      double best_n = -1;
      for (int R = 1; R <= cc.probe_R_max; ++R) {
        double niv = std::floor(std::exp(std::fmin(700.0, -R * sig->log_value(ev))));
        if (niv > static_cast<double>(cc.sum_cap)) continue;
        if (niv > best_n) {
          best_n = niv;
          best = window_sum(self, ev, start, static_cast<long long>(niv), cc);
        }
      }
      if (best_n < 0) throw GridTooDeep("no feasible probe for the proposal");
      return LogReal::from_double(best);
    });
  }

  // certification: one witness per q <= q_max
  if (tb || direct) {
    bool all_ok = true;
    std::vector<CertPair> cert;
    for (int q = 1; q <= cfg.q_max && all_ok; ++q) {
      HyperNatural M;
      try {
        ExprPtr w = tb ? tb->witness(q)
                       : intpart(pow(gauge_ref(a.sigma), c(-std::min(q, cfg.probe_R_max))));
        M = hypernat_from_net(w, a.sigma, cfg);
      } catch (const TypeError& err) {
        res.evidence.push_back("witness for q=" + std::to_string(q) +
                               " is not sigma-moderate: " + err.what());
        all_ok = false;
        break;
      }
      if (!tb && !direct) direct = direct_probe_sums(a, probes, cfg);
      VerifyOutcome v = verify_level(a, tb, s_rep, q, M, probes, direct ? &*direct : nullptr, cfg);
      if (!v.ok) {
        res.evidence.push_back("level q=" + std::to_string(q) + " failed: " + v.why);
        all_ok = false;
        break;
      }
      CertPair cp;
      cp.q = q;
      cp.M = M;
      cp.route = v.route + (sum_note.empty() ? "" : "; " + sum_note);
      cp.grid_from = v.from;
      cp.grid_to = v.to;
      cert.push_back(std::move(cp));
    }
    if (all_ok) {
      res.status = HyperseriesResult::Converges;
      res.sum = gn(s_rep, a.rho);
      res.certificate = std::move(cert);
      return res;
    }
  }

  // divergence: partial sums at escalating probes against rho^{-q}
  bool nonneg = terms_nonnegative(a, cfg);
  int strong_q = 0;
  int overall_sign = 0;
  for (int q = 1; q <= cfg.q_div; ++q) {
    bool found = false;
    for (int R = 1; R <= cfg.q_div + 2 && !found; ++R) {
      SampledNet s = sums_at_R_probe(a, R, cfg);
      if (!s.feasible() || s.k_last < 2) continue;
      bool exceeds = true;
      int sgn = 0;
      for (int k = s.k_last - 2; k <= s.k_last; ++k) {
        const LogReal& v = s.v[static_cast<size_t>(k)];
        if (v.is_zero() || v.lg <= -q * rho_lg[static_cast<size_t>(k)]) exceeds = false;
        sgn = v.sgn;
      }
      if (exceeds) {
        found = true;
        overall_sign = sgn;
        res.evidence.push_back("S at int(sigma^-" + std::to_string(R) + ") exceeds rho^-" +
                               std::to_string(q) + " on the grid tail");
      }
    }
    if (!found) break;
    strong_q = q;
  }
  if (strong_q >= cfg.q_div && overall_sign != 0) {
    res.status = overall_sign > 0 ? HyperseriesResult::DivergesPlus
                                  : HyperseriesResult::DivergesMinus;
    return res;
  }

  // monotone, non-Cauchy growth (e.g. logarithmic partial sums): exceeds
  // every real bound though not rho^{-q}
  if (nonneg) {
    bool monotone = true, noncauchy = true, unbounded = true;
    SampledNet prev = sums_at_R_probe(a, 1, cfg);
    for (int R = 2; R <= cfg.probe_R_max + 1; ++R) {
      SampledNet cur = sums_at_R_probe(a, R, cfg);
      int k1 = std::min(prev.k_last, cur.k_last);
      if (k1 < 2) {
        unbounded = false;
        break;
      }
      for (int k = k1 - 2; k <= k1; ++k) {
        LogReal w = cur.v[static_cast<size_t>(k)] - prev.v[static_cast<size_t>(k)];
        if (w.sgn < 0) monotone = false;
        if (w.is_zero() || w.lg < rho_lg[static_cast<size_t>(k)]) noncauchy = false;
      }
      prev = cur;
    }
    if (monotone && noncauchy && unbounded) {
      res.status = HyperseriesResult::DivergesPlus;
      res.evidence.push_back(
          "monotone partial sums; probe-to-probe increments stay above rho^1 "
          "(Cauchy criterion refuted); grows past every real bound");
      return res;
    }
  }

  res.status = HyperseriesResult::NoVerdict;
  if (res.evidence.empty()) res.evidence.push_back("neither convergence nor divergence certified");
  return res;
}

bool recheck_cert_pair(HyperSequence& a, const GeneralizedNumber& s, const CertPair& pair,
                       const Config& cfg) {
  auto tb = tail_bound(a.rep, a.start, a.rho, cfg);
  auto probes = probe_family(a.sigma, cfg);
  std::optional<std::vector<std::vector<std::optional<double>>>> direct;
  if (!tb) direct = direct_probe_sums(a, probes, cfg);
  VerifyOutcome v =
      verify_level(a, tb, s.rep, pair.q, pair.M, probes, direct ? &*direct : nullptr, cfg);
  return v.ok;
}

Verdict tail_identity_check(HyperSequence& a, const HyperNatural& N, const HyperNatural& M,
                            const Config& cfg) {
  Verdict cls = is_moderate_over_hypersums(a, cfg);
  if (!cls.proven()) return Verdict::unknown_with("sequence unclassified");
  ExprPtr start_e = c(static_cast<double>(a.start));
  ExprPtr nm = add(N.rep, M.rep);
  ExprPtr s_full = window_sum_net(a, start_e, nm);
  ExprPtr s_head = window_sum_net(a, start_e, N.rep);
  ExprPtr s_tail = window_sum_net(a, add(N.rep, c(1)), nm);
  auto lhs = gn(sub(s_full, s_head), a.rho);
  auto rhs = gn(s_tail, a.rho);
  OrderVerdict v = gn_compare(lhs, rhs, cfg);
  if (v.is(OrderVerdict::EQ))
    return Verdict::proven_with(cfg.q_max, v.grid_from, v.grid_to, "window split identity");
  return Verdict{v.rel == OrderVerdict::Unknown ? Truth::Unknown : Truth::Refuted,
                 std::nullopt, v.grid_from, v.grid_to, "split differs: " + std::string(to_string(v.rel))};
}

Verdict tail_vanishes(HyperSequence& a, const HyperseriesResult& r, const Config& cfg) {
  auto pts = cfg.grid.points();
  auto rho_lg = gauge_logs(*a.rho, cfg);
  auto probes = probe_family(a.sigma, cfg);

  // decide hyperlim a_N = 0: for each q a threshold M_q past which every
  // probe keeps |a_N| < rho^q. Thresholds come from the certificate when
  // present, else from the probe family itself.
  for (int q = 1; q <= cfg.q_max; ++q) {
    ExprPtr m_rep;
    for (const auto& pair : r.certificate)
      if (pair.q == q) m_rep = pair.M.rep;
    bool level_ok = false;
    std::vector<ExprPtr> thresholds;
    if (m_rep) thresholds.push_back(m_rep);
    for (const auto& p : probes) thresholds.push_back(p.N.rep);
    for (const auto& thr : thresholds) {
      bool ok = true;
      int applicable = 0;
      for (const auto& p : probes) {
        ExprPtr ext = subst_n(a.rep, max(p.N.rep, c(static_cast<double>(a.start))));
        for (size_t k = 0; k < pts.size() && ok; ++k) {
          double ev = pts[k];
          double nP = ni(p.N, ev);
          double nT = eval_lg(thr, EvalCtx{ev, std::nullopt, std::nullopt, &cfg}).to_double();
          if (!(nP >= nT)) continue;
          LogReal v;
          try {
            v = eval_lg(ext, EvalCtx{ev, std::nullopt, std::nullopt, &cfg});
          } catch (const GridTooDeep&) {
            continue;
          }
          ++applicable;
          if (!(v.is_zero() || v.lg < q * rho_lg[k])) ok = false;
        }
        if (!ok) break;
      }
      if (ok && applicable >= 3) {
        level_ok = true;
        break;
      }
    }
    if (!level_ok) {
      // refute when the deepest probes persistently stay at or above rho^q
      const auto& big = probes.back();
      ExprPtr ext = subst_n(a.rep, max(big.N.rep, c(static_cast<double>(a.start))));
      int bad = 0, seen = 0;
      for (size_t k = 0; k < pts.size(); ++k) {
        LogReal v;
        try {
          v = eval_lg(ext, EvalCtx{pts[k], std::nullopt, std::nullopt, &cfg});
        } catch (const GridTooDeep&) {
          continue;
        }
        ++seen;
        if (!(v.is_zero() || v.lg < q * rho_lg[k])) ++bad;
      }
      if (seen >= 3 && bad >= seen - 1)
        return Verdict::refuted_with(q, 0, cfg.grid.count - 1,
                                     "general term stays above rho^" + std::to_string(q));
      return Verdict::unknown_with("no threshold certifies q=" + std::to_string(q));
    }
  }
  if (r.status != HyperseriesResult::Converges)
    return Verdict::unknown_with("term vanishes but the hyperseries is not certified convergent");
  // adding a hyperfinite head leaves the sum: S(0,K) + W(K+1,N) = S(0,N)
  auto K = hypernat_const(5, a.sigma);
  auto Nbig = probes.back().N;
  Verdict split = tail_identity_check(a, K, Nbig, cfg);
  if (!split.proven())
    return Verdict::unknown_with("head-splitting identity not confirmed: " + split.note);
  return Verdict::proven_with(cfg.q_max, 0, cfg.grid.count - 1,
                              "general term vanishes past certified thresholds");
}

// ---- Cesaro -----------------------------------------------------------------

namespace {

// Sum_{n=n0}^{N} bound(n) overestimated on geometric bins (bound decreasing)
LogReal cumulative_bound(const std::function<LogReal(double, double)>& bound_lg, double ev,
                         double n0, double N) {
  if (N < n0) return LogReal::zero();
  LogReal total = LogReal::zero();
  double lo = n0;
  for (int bin = 0; bin < 400 && lo <= N; ++bin) {
    double hi = std::fmin(N, std::fmax(lo * 2, lo + 16));
    LogReal b = bound_lg(ev, lo).abs();
    LogReal count = LogReal::from_double(hi - lo + 1);
    total = total + count * b;
    lo = hi + 1;
  }
  return total;
}

}  // namespace

HyperseriesResult cesaro_sum(HyperSequence& a, const Config& cfg) {
  HyperseriesResult res;
  Verdict cls = is_moderate_over_hypersums(a, cfg);
  if (!cls.proven()) {
    res.evidence.push_back("not moderate over hypersums: " + cls.note);
    return res;
  }
  SeqForm form = recognize_form(a.rep);
  auto probes = probe_family(a.sigma, cfg);

  ExprPtr s_rep;
  std::function<LogReal(double, double)> cesaro_bound;
  double thr = std::max(1.0, static_cast<double>(a.start));

  if (form.kind == SeqForm::Zero) {
    s_rep = c(0);
    cesaro_bound = [](double, double) { return LogReal::zero(); };
  } else if (form.kind == SeqForm::AlternatingUnit) {
    // partial sums alternate 1,0,1,...: |c_N - 1/2| <= 1/(2(N+1)) exactly
    s_rep = c(0.5);
    cesaro_bound = [](double, double N) {
      return LogReal::from_double(1.0 / (2.0 * (N + 1)));
    };
  } else if (auto tb = tail_bound(a.rep, a.start, a.rho, cfg)) {
    // |c_N - s| <= (C0 + cumulative tail bounds) / (N+1)
    s_rep = tb->limit;
    ExprPtr rep = a.rep;
    long long start = a.start;
    Config cc = cfg;
    auto tb_copy = *tb;
    cesaro_bound = [rep, start, cc, tb_copy](double ev, double N) {
      double n0 = std::fmin(tb_copy.threshold(ev) + 64, 100000.0);
      // head: direct |S_n - s|, summed
      double C0 = 0;
      EvalCtx ctx{ev, std::nullopt, std::nullopt, &cc};
      double s_val = eval_lg(tb_copy.limit, ctx).to_double();
      double S = 0, comp = 0;
      for (long long n = start; n <= static_cast<long long>(n0); ++n) {
        ctx.n = n;
        double y = eval_d(rep, ctx) - comp;
        double t = S + y;
        comp = (t - S) - y;
        S = t;
        C0 += std::fabs(S - s_val);
      }
      LogReal cum = cumulative_bound(tb_copy.bound_lg, ev, n0 + 1, N);
      LogReal num = LogReal::from_double(C0) + cum;
      return num / LogReal::from_double(N + 1);
    };
    thr = std::fmax(thr, 1.0);
  } else {
    res.evidence.push_back("no averaged-remainder machinery for this form");
    return res;
  }

  auto rho_lg = gauge_logs(*a.rho, cfg);
  auto pts = cfg.grid.points();
  std::vector<CertPair> cert;
  for (int q = 1; q <= cfg.q_max; ++q) {
    GaugePtr rho_c = a.rho;
    auto bound_copy = cesaro_bound;
    double t0 = thr;
    ExprPtr w = closure_net("cesaro_witness(q=" + std::to_string(q) + ")",
                            [bound_copy, rho_c, t0, q](double ev) {
                              double target = q * rho_c->log_value(ev);
                              return LogReal::from_double(
                                  invert_bound(bound_copy, ev, t0, target));
                            });
    HyperNatural M;
    try {
      M = hypernat_from_net(w, a.sigma, cfg);
    } catch (const TypeError& err) {
      res.evidence.push_back("cesaro witness for q=" + std::to_string(q) +
                             " not sigma-moderate: " + err.what());
      return res;
    }
    // verify the bound at M and at larger probes
    for (size_t k = 0; k < pts.size(); ++k) {
      double ev = pts[k];
      double target = q * rho_lg[k];
      double nM = ni_lg(M, ev).to_double();
      auto check = [&](double N) {
        if (!std::isfinite(N)) return true;
        LogReal b = cesaro_bound(ev, N);
        return b.sgn == 0 || b.lg < target;
      };
      if (!check(nM)) {
        res.evidence.push_back("cesaro bound fails at q=" + std::to_string(q));
        return res;
      }
      for (const auto& p : probes) {
        double nP = ni(p.N, ev);
        if (nP >= nM && !check(nP)) {
          res.evidence.push_back("cesaro bound fails at probe " + p.label);
          return res;
        }
      }
    }
    CertPair cp;
    cp.q = q;
    cp.M = M;
    cp.route = "averaged remainder bound";
    cp.grid_from = 0;
    cp.grid_to = cfg.grid.count - 1;
    cert.push_back(std::move(cp));
  }
  res.status = HyperseriesResult::Converges;
  res.sum = gn(s_rep, a.rho);
  res.certificate = std::move(cert);
  return res;
}

GaugePtr gauge_from_epswise(const ExprPtr& m_net, const GaugePtr& mu, const Config& cfg) {
  auto pts = cfg.grid.points();
  for (double ev : pts) {
    LogReal m = eval_lg(m_net, EvalCtx{ev, std::nullopt, std::nullopt, &cfg});
    if (m.sgn <= 0 || m < LogReal::one())
      throw TypeError("gauge_from_epswise: M_eps must be >= 1 on the grid");
  }
  auto g = Gauge::derived_min(mu, m_net);
  g->validate(cfg.grid);
  return g;
}

std::pair<GaugePtr, HyperseriesResult> epswise_abs_convergence(const ExprPtr& rep,
                                                               long long start,
                                                               const GaugePtr& mu,
                                                               const GaugePtr& rho,
                                                               const Config& cfg) {
  // remainder machinery on |a|
  auto tb_abs = tail_bound(abs(rep), start, rho, cfg);
  if (!tb_abs)
    throw TypeError("epswise_abs_convergence: no remainder bound for this sequence");
  Verdict lim_mod = is_moderate(tb_abs->limit, rho, cfg);
  if (!lim_mod.proven())
    throw TypeError("epswise_abs_convergence: limit net is not rho-moderate (" +
                    std::string(to_string(lim_mod.truth)) + ")");

  // M_eps from the q_eps = ceil(1/eps) schedule
  auto bound_copy = tb_abs->bound_lg;
  auto thr = tb_abs->threshold;
  auto wlg = tb_abs->witness_lg;
  GaugePtr rho_c = rho;
  ExprPtr m_net = closure_net("epswise_threshold", [bound_copy, thr, wlg, rho_c](double ev) {
    double q_eps = std::ceil(1.0 / ev);
    double target = q_eps * rho_c->log_value(ev);
    LogReal m = wlg ? wlg(ev, target)
                    : LogReal::from_double(invert_bound(bound_copy, ev, thr(ev), target));
    return max(m, LogReal::one());
  });
  GaugePtr sigma = gauge_from_epswise(m_net, mu, cfg);

  HyperSequence a = make_sequence(rep, sigma, rho, start);
  Verdict cls = is_moderate_over_hypersums(a, cfg);
  HyperseriesResult res;
  if (!cls.proven()) {
    res.evidence.push_back("classification over the derived gauge failed: " + cls.note);
    return {sigma, res};
  }
  res = hyperseries_sum(a, std::nullopt, cfg);
  return {sigma, res};
}

}  // namespace rcgn
