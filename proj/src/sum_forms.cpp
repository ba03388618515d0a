#include "rcgn/sum_forms.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace rcgn {

namespace {

bool is_const(const ExprPtr& e, double v) { return e->op == Op::Const && e->cval == v; }
bool is_zero(const ExprPtr& e) { return is_const(e, 0.0); }
bool is_one(const ExprPtr& e) { return is_const(e, 1.0); }

ExprPtr sadd(ExprPtr a, ExprPtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  return add(std::move(a), std::move(b));
}
ExprPtr ssub(ExprPtr a, ExprPtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return neg(std::move(b));
  return sub(std::move(a), std::move(b));
}
ExprPtr smul(ExprPtr a, ExprPtr b) {
  if (is_zero(a) || is_zero(b)) return c(0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  return mul(std::move(a), std::move(b));
}
ExprPtr sdiv(ExprPtr a, ExprPtr b) {
  if (is_zero(a)) return c(0);
  if (is_one(b)) return a;
  return div(std::move(a), std::move(b));
}

// a_n = alpha + beta * n by structural recursion
std::optional<std::pair<ExprPtr, ExprPtr>> linear_in_n(const ExprPtr& e) {
  if (!contains_n(e)) return std::make_pair(e, c(0));
  switch (e->op) {
    case Op::VarN:
      return std::make_pair(c(0), c(1));
    case Op::Add: {
      auto l = linear_in_n(e->kids[0]), r = linear_in_n(e->kids[1]);
      if (!l || !r) return std::nullopt;
      return std::make_pair(sadd(l->first, r->first), sadd(l->second, r->second));
    }
    case Op::Sub: {
      auto l = linear_in_n(e->kids[0]), r = linear_in_n(e->kids[1]);
      if (!l || !r) return std::nullopt;
      return std::make_pair(ssub(l->first, r->first), ssub(l->second, r->second));
    }
    case Op::Mul: {
      if (!contains_n(e->kids[0])) {
        auto r = linear_in_n(e->kids[1]);
        if (!r) return std::nullopt;
        return std::make_pair(smul(e->kids[0], r->first), smul(e->kids[0], r->second));
      }
      if (!contains_n(e->kids[1])) {
        auto l = linear_in_n(e->kids[0]);
        if (!l) return std::nullopt;
        return std::make_pair(smul(l->first, e->kids[1]), smul(l->second, e->kids[1]));
      }
      return std::nullopt;
    }
    case Op::Div: {
      if (contains_n(e->kids[1])) return std::nullopt;
      auto l = linear_in_n(e->kids[0]);
      if (!l) return std::nullopt;
      return std::make_pair(sdiv(l->first, e->kids[1]), sdiv(l->second, e->kids[1]));
    }
    case Op::Neg: {
      auto l = linear_in_n(e->kids[0]);
      if (!l) return std::nullopt;
      return std::make_pair(neg(l->first), neg(l->second));
    }
    default:
      return std::nullopt;
  }
}

// multiplicative decomposition of a sequence term
struct Factors {
  std::vector<ExprPtr> coeff_num, coeff_den;  // n-free multipliers / divisors
  std::vector<ExprPtr> geo_num, geo_den;      // bases of k^n factors
  int alt = 0;                                // (-1)^n parity
  int fact_num = 0, fact_den = 0;             // n! factors
  std::vector<std::pair<double, double>> powlaw;  // (shift, signed exponent) of (n+shift)^p
  bool bad = false;
};

// base^(n + shift) splits into base^shift * (base)^n
bool match_n_plus_const(const ExprPtr& e, double* shift) {
  if (e->op == Op::VarN) {
    *shift = 0;
    return true;
  }
  if (e->op == Op::Add && e->kids[0]->op == Op::VarN && e->kids[1]->op == Op::Const) {
    *shift = e->kids[1]->cval;
    return true;
  }
  if (e->op == Op::Add && e->kids[1]->op == Op::VarN && e->kids[0]->op == Op::Const) {
    *shift = e->kids[0]->cval;
    return true;
  }
  if (e->op == Op::Sub && e->kids[0]->op == Op::VarN && e->kids[1]->op == Op::Const) {
    *shift = -e->kids[1]->cval;
    return true;
  }
  return false;
}

void collect(const ExprPtr& e, bool inv, Factors& f) {
  if (f.bad) return;
  if (!contains_n(e)) {
    (inv ? f.coeff_den : f.coeff_num).push_back(e);
    return;
  }
  switch (e->op) {
    case Op::Mul:
      collect(e->kids[0], inv, f);
      collect(e->kids[1], inv, f);
      return;
    case Op::Div:
      collect(e->kids[0], inv, f);
      collect(e->kids[1], !inv, f);
      return;
    case Op::Neg:
      (inv ? f.coeff_den : f.coeff_num).push_back(c(-1));
      collect(e->kids[0], inv, f);
      return;
    case Op::VarN:
      f.powlaw.emplace_back(0.0, inv ? -1.0 : 1.0);
      return;
    case Op::Factorial:
      if (e->kids[0]->op == Op::VarN) {
        (inv ? f.fact_den : f.fact_num) += 1;
        return;
      }
      f.bad = true;
      return;
    case Op::Pow: {
      double shift = 0;
      if (e->kids[1]->op == Op::Const && match_n_plus_const(e->kids[0], &shift)) {
        double p = e->kids[1]->cval;
        f.powlaw.emplace_back(shift, inv ? -p : p);
        return;
      }
      if (!contains_n(e->kids[0])) {
        const ExprPtr& base = e->kids[0];
        bool inverted = false;
        ExprPtr ex = e->kids[1];
        if (ex->op == Op::Neg) {  // k^{-(n+s)} = (k^{-1})^{n+s}
          inverted = true;
          ex = ex->kids[0];
        } else if (ex->op == Op::Sub && !contains_n(ex->kids[0]) &&
                   ex->kids[1]->op == Op::VarN) {  // k^{c-n}
          (inv ? f.coeff_den : f.coeff_num).push_back(pow(base, ex->kids[0]));
          inverted = true;
          ex = var_n();
        }
        if (match_n_plus_const(ex, &shift)) {
          bool den = inv ^ inverted;
          if (shift != 0)  // k^{n+s} = k^s * k^n
            (den ? f.coeff_den : f.coeff_num).push_back(pow(base, c(shift)));
          if (base->op == Op::Const && base->cval == -1.0) {
            f.alt ^= 1;
            return;
          }
          (den ? f.geo_den : f.geo_num).push_back(base);
          return;
        }
      }
      f.bad = true;
      return;
    }
    default:
      f.bad = true;
      return;
  }
}

ExprPtr fold_mul(const std::vector<ExprPtr>& xs) {
  ExprPtr out = c(1);
  for (const auto& x : xs) out = smul(out, x);
  return out;
}

SeqForm from_factors(const Factors& f) {
  SeqForm out;
  ExprPtr coeff = fold_mul(f.coeff_num);
  if (!f.coeff_den.empty()) coeff = sdiv(coeff, fold_mul(f.coeff_den));

  const bool has_geo = !f.geo_num.empty() || !f.geo_den.empty();
  ExprPtr base = fold_mul(f.geo_num);
  if (!f.geo_den.empty()) base = sdiv(base, fold_mul(f.geo_den));

  // (-1)^n k^n = (-k)^n
  auto signed_base = [&]() -> ExprPtr {
    if (!has_geo) return f.alt ? c(-1) : c(1);
    return f.alt ? neg(base) : base;
  };

  int fact = f.fact_num - f.fact_den;
  if (fact > 0) return out;  // n! in the numerator: no closed machinery

  if (fact == -1 && f.powlaw.empty()) {
    out.kind = SeqForm::Exponential;
    out.coeff = coeff;
    out.base = signed_base();
    return out;
  }
  if (fact != 0) return out;

  if (f.powlaw.empty()) {
    if (!has_geo && !f.alt) {
      out.kind = SeqForm::ConstInN;
      out.coeff = coeff;
      return out;
    }
    if (!has_geo && f.alt && is_one(coeff)) {
      out.kind = SeqForm::AlternatingUnit;
      out.coeff = c(1);
      out.base = c(-1);
      return out;
    }
    ExprPtr b = signed_base();
    if (b->op == Op::Const && b->cval == 1.0) {
      out.kind = SeqForm::ConstInN;
      out.coeff = coeff;
      return out;
    }
    out.kind = SeqForm::Geometric;
    out.coeff = coeff;
    out.base = b;
    return out;
  }

  if (!has_geo && f.powlaw.size() == 1) {
    auto [shift, pw] = f.powlaw[0];
    if (pw < 0) {
      if (f.alt) {
        out.kind = SeqForm::AltFactor;
        out.inner = sdiv(coeff, pow(sadd(var_n(), c(shift)), c(-pw)));
        return out;
      }
      out.kind = SeqForm::PowerLaw;
      out.coeff = coeff;
      out.shift = shift;
      out.p = -pw;
      return out;
    }
    if (pw == 1.0 && shift == 0.0 && !f.alt) {
      out.kind = SeqForm::PolyLinear;
      out.alpha = c(0);
      out.beta = coeff;
      return out;
    }
  }
  return out;
}

SeqForm transform_abs(const SeqForm& f) {
  SeqForm out;
  switch (f.kind) {
    case SeqForm::Zero:
      return f;
    case SeqForm::ConstInN:
      out.kind = SeqForm::ConstInN;
      out.coeff = abs(f.coeff);
      return out;
    case SeqForm::AlternatingUnit:
      out.kind = SeqForm::ConstInN;
      out.coeff = c(1);
      return out;
    case SeqForm::Geometric:
      out.kind = SeqForm::Geometric;
      out.coeff = abs(f.coeff);
      out.base = abs(f.base);
      return out;
    case SeqForm::Exponential:
      out.kind = SeqForm::Exponential;
      out.coeff = abs(f.coeff);
      out.base = abs(f.base);
      return out;
    case SeqForm::PowerLaw:
      out = f;
      out.coeff = abs(f.coeff);
      return out;
    case SeqForm::AltFactor:
      return recognize_form(abs(f.inner));
    default:
      return out;  // Generic
  }
}

}  // namespace

SeqForm recognize_form(const ExprPtr& rep) {
  SeqForm out;
  if (is_zero(rep)) {
    out.kind = SeqForm::Zero;
    return out;
  }
  if (rep->op == Op::Abs) return transform_abs(recognize_form(rep->kids[0]));
  if (rep->op == Op::Convolution) {
    SeqForm a = recognize_form(rep->kids[0]);
    SeqForm b = recognize_form(rep->kids[1]);
    if (a.kind == SeqForm::Geometric && b.kind == SeqForm::Geometric && equal(a.base, b.base)) {
      out.kind = SeqForm::ConvGeomGeom;
      out.coeff = a.coeff;
      out.coeff2 = b.coeff;
      out.base = a.base;
      out.base2 = b.base;
      return out;
    }
    if (a.kind == SeqForm::Exponential && b.kind == SeqForm::Exponential) {
      out.kind = SeqForm::ConvExpExp;
      out.coeff = a.coeff;
      out.coeff2 = b.coeff;
      out.base = a.base;
      out.base2 = b.base;
      return out;
    }
    return out;
  }
  if (!contains_n(rep)) {
    out.kind = SeqForm::ConstInN;
    out.coeff = rep;
    return out;
  }
  if (contains(*rep, Op::Piecewise) || contains(*rep, Op::PartialSum) ||
      contains(*rep, Op::Closure) || contains(*rep, Op::PatchedSeq) ||
      contains(*rep, Op::Convolution))
    return out;

  Factors f;
  collect(rep, false, f);
  if (!f.bad) {
    SeqForm ff = from_factors(f);
    if (ff.kind != SeqForm::Generic) return ff;
  }
  if (auto lin = linear_in_n(rep)) {
    out.kind = SeqForm::PolyLinear;
    out.alpha = lin->first;
    out.beta = lin->second;
    return out;
  }
  return out;
}

namespace {

ExprPtr guard_empty(const ExprPtr& from, const ExprPtr& to, ExprPtr formula) {
  // windows with to < from contribute 0
  return piecewise(to, sub(from, c(1)), /*strict=*/false, c(0), std::move(formula));
}

ExprPtr window_count(const ExprPtr& from, const ExprPtr& to) {
  return max(sub(add(to, c(1)), from), c(0));
}

}  // namespace

std::optional<ExprPtr> closed_partial_sum(const ExprPtr& rep, const ExprPtr& from,
                                          const ExprPtr& to) {
  SeqForm f = recognize_form(rep);
  switch (f.kind) {
    case SeqForm::Zero:
      return c(0);
    case SeqForm::ConstInN:
      return smul(window_count(from, to), f.coeff);
    case SeqForm::AlternatingUnit:
      // ((-1)^F + (-1)^T) / 2
      return guard_empty(from, to,
                         div(add(pow(c(-1), from), pow(c(-1), to)), c(2)));
    case SeqForm::Geometric: {
      if (f.base->op == Op::Const && f.base->cval == 1.0)
        return smul(window_count(from, to), f.coeff);
      auto num = sub(pow(f.base, from), pow(f.base, add(to, c(1))));
      return guard_empty(from, to, smul(f.coeff, div(num, sub(c(1), f.base))));
    }
    case SeqForm::PolyLinear: {
      auto count = window_count(from, to);
      auto tri = div(mul(add(from, to), count), c(2));
      return sadd(smul(f.alpha, count), smul(f.beta, tri));
    }
    case SeqForm::ConvGeomGeom: {
      // S(m) = C * (1 - (m+2) k^{m+1} + (m+1) k^{m+2}) / (1-k)^2, valid from m = -1
      auto C = smul(f.coeff, f.coeff2);
      auto k = f.base;
      auto S = [&](ExprPtr m) {
        auto t1 = mul(add(m, c(2)), pow(k, add(m, c(1))));
        auto t2 = mul(add(m, c(1)), pow(k, add(m, c(2))));
        return smul(C, div(add(sub(c(1), t1), t2), pow(sub(c(1), k), c(2))));
      };
      return guard_empty(from, to, sub(S(to), S(sub(from, c(1)))));
    }
    default:
      return std::nullopt;
  }
}

double invert_bound(const std::function<LogReal(double, double)>& bound_lg, double eps_v,
                    double lo, double target_lg) {
  auto below = [&](double N) {
    LogReal b = bound_lg(eps_v, N);
    return b.sgn == 0 || b.lg < target_lg;
  };
  double hi = std::fmax(lo, 1.0);
  const double limit = std::pow(2.0, 500);
  while (!below(hi)) {
    hi = hi * 2 + 1;
    if (hi > limit) return std::numeric_limits<double>::infinity();
  }
  lo = std::fmax(lo, 0.0);
  while (hi - lo > 1.0) {
    double mid = std::floor((lo + hi) / 2);
    if (below(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace {

double max_abs_on_grid(const ExprPtr& e, const Config& cfg) {
  double m = 0;
  for (double p : cfg.grid.points()) {
    EvalCtx ctx{p, std::nullopt, std::nullopt, &cfg};
    LogReal v = eval_lg(e, ctx);
    if (v.sgn != 0) m = std::fmax(m, std::exp(std::fmin(v.lg, 700.0)));
  }
  return m;
}

bool abs_below_one_on_grid(const ExprPtr& k, const Config& cfg) {
  for (double p : cfg.grid.points()) {
    EvalCtx ctx{p, std::nullopt, std::nullopt, &cfg};
    LogReal v = eval_lg(k, ctx);
    if (!(v.abs() < LogReal::one())) return false;
  }
  return true;
}

LogReal eval_at(const ExprPtr& e, double eps_v) {
  EvalCtx ctx{eps_v, std::nullopt, std::nullopt, nullptr};
  return eval_lg(e, ctx);
}

std::optional<TailBound> geometric_tail(ExprPtr coeff, ExprPtr k, long long start,
                                        const GaugePtr& rho, const Config& cfg) {
  if (!abs_below_one_on_grid(k, cfg)) return std::nullopt;
  TailBound t;
  t.limit = sdiv(smul(coeff, pow(k, c(static_cast<double>(start)))), sub(c(1), k));
  t.bound_lg = [coeff, k](double eps_v, double N) {
    LogReal cv = eval_at(coeff, eps_v);
    LogReal kv = eval_at(k, eps_v).abs();
    LogReal one_minus = (LogReal::one() - eval_at(k, eps_v)).abs();
    return cv.abs() * pow(kv, N + 1) / one_minus;
  };
  t.threshold = [start](double) { return static_cast<double>(start); };
  GaugePtr rho_c = rho;
  ExprPtr k_c = k;
  t.witness = [rho_c, k_c](int q) {
    return add(intpart(div(mul(c(q), log(gauge_ref(rho_c))), log(abs(k_c)))), c(1));
  };
  return t;
}

std::optional<TailBound> exponential_tail(ExprPtr coeff, ExprPtr x, long long start,
                                          const GaugePtr& rho, const Config& cfg) {
  double M = max_abs_on_grid(x, cfg);
  if (!(M < 1e6)) return std::nullopt;  // needs a finite bound |x| <= M
  // smallest n0 >= 2M with M^{n+1}/(n+1)! < 2^{-(n+1)}; from there the tail
  // is dominated by sum 2^{-n} = 2^{-N}
  double n0 = std::fmax(1.0, std::ceil(2 * M));
  while ((n0 + 1) * (std::log(std::fmax(M, 1e-300)) + std::log(2.0)) >= std::lgamma(n0 + 2))
    n0 += 1;
  TailBound t;
  ExprPtr lim = exp(x);
  for (long long n = 0; n < start; ++n)
    lim = sub(lim, sdiv(pow(x, c(static_cast<double>(n))), factorial(c(static_cast<double>(n)))));
  t.limit = smul(coeff, lim);
  t.bound_lg = [coeff, x, n0](double eps_v, double N) {
    LogReal cv = eval_at(coeff, eps_v).abs();
    LogReal dyadic{1, -(N)*std::log(2.0)};
    LogReal xv = eval_at(x, eps_v).abs();
    LogReal factorial_form =
        xv.is_zero() ? LogReal::zero()
                     : LogReal{1, std::log(2.0) + (N + 1) * xv.lg - std::lgamma(N + 2)};
    LogReal b = N >= n0 ? min(dyadic, factorial_form) : factorial_form;
    return cv * b;
  };
  t.threshold = [n0, start](double) { return std::fmax(n0, static_cast<double>(start)); };
  GaugePtr rho_c = rho;
  t.witness = [rho_c, n0](int q) {
    return max(c(n0), add(intpart(div(mul(c(q), log(gauge_ref(rho_c))), log(c(0.5)))), c(1)));
  };
  return t;
}

std::optional<TailBound> powerlaw_tail(const SeqForm& f, long long start, const GaugePtr& rho,
                                       const Config&) {
  if (!(f.p > 1.0)) return std::nullopt;
  double s = f.shift, p = f.p;
  long long n_from = std::max(start, s <= 0 ? static_cast<long long>(std::floor(-s)) + 1 : 0LL);
  // constant-in-eps zeta tail: Sum_{n=n_from}^inf (n+s)^{-p}
  double Z = 0, comp = 0;
  long long Nsum = 1000000;
  for (long long n = n_from; n <= Nsum; ++n) {
    double y = std::pow(static_cast<double>(n) + s, -p) - comp;
    double tv = Z + y;
    comp = (tv - Z) - y;
    Z = tv;
  }
  Z += std::pow(static_cast<double>(Nsum) + s + 0.5, 1 - p) / (p - 1);
  TailBound t;
  t.limit = smul(f.coeff, c(Z));
  ExprPtr coeff = f.coeff;
  t.bound_lg = [coeff, s, p](double eps_v, double N) {
    LogReal cv = eval_at(coeff, eps_v).abs();
    return cv * LogReal{1, (1 - p) * std::log(N + s) - std::log(p - 1)};
  };
  t.threshold = [n_from](double) { return static_cast<double>(n_from); };
  // bound < target solves in closed form: log(N+s) > (log|c| - log(p-1) - target)/(p-1)
  ExprPtr coeff_w = f.coeff;
  double thr = static_cast<double>(n_from);
  t.witness_lg = [coeff_w, s, p, thr](double ev, double target) {
    LogReal cv = eval_at(coeff_w, ev).abs();
    if (cv.is_zero()) return LogReal::from_double(thr);
    double lgN = (cv.lg - std::log(p - 1) - target) / (p - 1) + 0.01;
    lgN = std::fmax(lgN, std::log(thr + 1.0));
    return LogReal{1, lgN};
  };
  auto wlg = t.witness_lg;
  GaugePtr rho_c = rho;
  t.witness = [wlg, rho_c](int q) {
    auto w = wlg;
    GaugePtr r = rho_c;
    int qq = q;
    return closure_net("powerlaw_witness(q=" + std::to_string(q) + ")", [w, r, qq](double ev) {
      LogReal n = w(ev, qq * r->log_value(ev));
      if (n.lg < 36.0) return LogReal::from_double(std::ceil(n.to_double()));
      return n;
    });
  };
  return t;
}

// closures get re-evaluated at the same grid points many times over
template <class F>
std::function<LogReal(double)> memoized(F&& fn) {
  auto cache = std::make_shared<std::map<double, LogReal>>();
  auto mx = std::make_shared<std::mutex>();
  return [cache, mx, fn = std::forward<F>(fn)](double ev) {
    {
      std::lock_guard<std::mutex> lock(*mx);
      auto it = cache->find(ev);
      if (it != cache->end()) return it->second;
    }
    LogReal v = fn(ev);
    std::lock_guard<std::mutex> lock(*mx);
    (*cache)[ev] = v;
    return v;
  };
}

std::optional<TailBound> altfactor_tail(const SeqForm& f, long long start, const GaugePtr& rho,
                                        const Config& cfg) {
  // |S_N - s| <= |g(N+1)| for g of constant sign with |g| decreasing to 0
  // (checked on samples)
  const ExprPtr g = f.inner;
  long long n_from = start;
  for (double epv : {cfg.grid.eps0, cfg.grid.points().back()}) {
    double prev = std::numeric_limits<double>::infinity();
    int sign = 0;
    for (long long n = std::max(start, 1LL); n < std::max(start, 1LL) + 64; ++n) {
      EvalCtx ctx{epv, n, std::nullopt, &cfg};
      double gv = eval_d(g, ctx);
      int sg = gv > 0 ? 1 : gv < 0 ? -1 : 0;
      if (sg != 0 && sign != 0 && sg != sign) return std::nullopt;
      if (sg != 0) sign = sg;
      if (std::fabs(gv) > prev + 1e-12) return std::nullopt;
      prev = std::fabs(gv);
    }
  }
  n_from = std::max(start, 1LL);
  TailBound t;
  Config cfg_c = cfg;
  t.limit = closure_net("alternating_sum(" + to_string(g) + ")",
                        memoized([g, n_from, cfg_c](double ev) {
    // averaged partial sums: error O(g'(N)) past the direct error O(g(N))
    long long N = 200000;
    double s0 = window_sum(mul(pow(c(-1), var_n()), g), ev, n_from, N, cfg_c);
    double s1 = s0 + ((N + 1) % 2 == 0 ? 1.0 : -1.0) *
                         eval_d(g, EvalCtx{ev, N + 1, std::nullopt, &cfg_c});
    return LogReal::from_double((s0 + s1) / 2);
  }));
  t.bound_lg = [g](double eps_v, double N) {
    auto idx = static_cast<long long>(std::nearbyint(std::fmin(N + 1, 9.0e15)));
    EvalCtx ctx{eps_v, idx, std::nullopt, nullptr};
    return eval_lg(g, ctx).abs();
  };
  t.threshold = [n_from](double) { return static_cast<double>(n_from); };
  auto bound_copy = t.bound_lg;
  GaugePtr rho_c = rho;
  double thr = static_cast<double>(n_from);
  t.witness = [bound_copy, rho_c, thr](int q) {
    auto b = bound_copy;
    GaugePtr r = rho_c;
    double t0 = thr;
    int qq = q;
    return closure_net("alternating_witness(q=" + std::to_string(q) + ")", [b, r, t0, qq](double ev) {
      double target = qq * r->log_value(ev);
      return LogReal::from_double(invert_bound(b, ev, t0, target));
    });
  };
  return t;
}

// sampled geometric domination for unrecognized decaying terms: if the
// termwise ratio stays below r < 1 on samples, the tail past N is bounded by
// |a_{N+1}| / (1-r). Certification is sampled, like the monotonicity checks.
std::optional<TailBound> ratio_tail(const ExprPtr& rep, long long start, const GaugePtr& rho,
                                    const Config& cfg) {
  const long long n0 = start + 8;
  double r_max = 0;
  for (double ev : cfg.grid.points()) {
    for (long long n = n0; n < n0 + 48; ++n) {
      LogReal a0, a1;
      try {
        a0 = eval_lg(rep, EvalCtx{ev, n, std::nullopt, &cfg}).abs();
        a1 = eval_lg(rep, EvalCtx{ev, n + 1, std::nullopt, &cfg}).abs();
      } catch (const EvalError&) {
        return std::nullopt;
      }
      if (a0.is_zero()) {
        if (a1.is_zero()) continue;
        return std::nullopt;
      }
      double r = std::exp(std::fmin(50.0, a1.lg - a0.lg));
      r_max = std::fmax(r_max, r);
    }
  }
  if (!(r_max < 0.9)) return std::nullopt;
  TailBound t;
  ExprPtr rep_c = rep;
  Config cc = cfg;
  t.limit = closure_net("series_limit(" + to_string(rep) + ")", memoized([rep_c, start, cc](double ev) {
    EvalCtx ctx{ev, std::nullopt, std::nullopt, &cc};
    double s = 0, comp = 0;
    for (long long n = start; n < start + 2000000; ++n) {
      ctx.n = n;
      double v = eval_d(rep_c, ctx);
      double y = v - comp;
      double tv = s + y;
      comp = (tv - s) - y;
      s = tv;
      if (n > start + 8 && std::fabs(v) < 1e-18 * std::fabs(s)) break;
    }
    return LogReal::from_double(s);
  }));
  double denom = 1.0 - r_max;
  t.bound_lg = [rep_c, denom, cc](double ev, double N) {
    if (N > 8.9e15) return LogReal::zero();  // factorial-type decay: far past the witness range
    EvalCtx ctx{ev, static_cast<long long>(std::nearbyint(N)) + 1, std::nullopt, &cc};
    return eval_lg(rep_c, ctx).abs() / LogReal::from_double(denom);
  };
  t.threshold = [n0](double) { return static_cast<double>(n0); };
  auto bound_copy = t.bound_lg;
  GaugePtr rho_c = rho;
  double thr = static_cast<double>(n0);
  t.witness = [bound_copy, rho_c, thr](int q) {
    auto b = bound_copy;
    GaugePtr r = rho_c;
    double t0 = thr;
    int qq = q;
    return closure_net("ratio_witness(q=" + std::to_string(q) + ")", [b, r, t0, qq](double ev) {
      double target = qq * r->log_value(ev);
      return LogReal::from_double(invert_bound(b, ev, t0, target));
    });
  };
  return t;
}

std::optional<TailBound> convgeom_tail(const SeqForm& f, const GaugePtr& rho, const Config& cfg) {
  if (!abs_below_one_on_grid(f.base, cfg)) return std::nullopt;
  ExprPtr C = smul(f.coeff, f.coeff2);
  ExprPtr k = f.base;
  TailBound t;
  t.limit = sdiv(C, pow(sub(c(1), k), c(2)));
  t.bound_lg = [C, k](double eps_v, double N) {
    LogReal cv = eval_at(C, eps_v).abs();
    LogReal kv = eval_at(k, eps_v);
    LogReal one_minus_sq = pow((LogReal::one() - kv).abs(), 2.0);
    // |S_N - s| = |C| |k|^{N+1} |(N+2) - (N+1)k| / (1-k)^2
    LogReal lin = (LogReal::from_double(N + 2) - LogReal::from_double(N + 1) * kv).abs();
    return cv * pow(kv.abs(), N + 1) * lin / one_minus_sq;
  };
  t.threshold = [](double) { return 0.0; };
  auto bound_copy = t.bound_lg;
  GaugePtr rho_c = rho;
  t.witness = [bound_copy, rho_c](int q) {
    auto b = bound_copy;
    GaugePtr r = rho_c;
    int qq = q;
    return closure_net("convgeom_witness(q=" + std::to_string(q) + ")", [b, r, qq](double ev) {
      double target = qq * r->log_value(ev);
      return LogReal::from_double(invert_bound(b, ev, 0.0, target));
    });
  };
  return t;
}

}  // namespace

std::optional<TailBound> tail_bound(const ExprPtr& rep, long long start, const GaugePtr& rho,
                                    const Config& cfg) {
  SeqForm f = recognize_form(rep);
  switch (f.kind) {
    case SeqForm::Zero: {
      TailBound t;
      t.limit = c(0);
      t.bound_lg = [](double, double) { return LogReal::zero(); };
      t.threshold = [](double) { return 0.0; };
      t.witness = [](int) { return c(0); };
      return t;
    }
    case SeqForm::Geometric:
      return geometric_tail(f.coeff, f.base, start, rho, cfg);
    case SeqForm::Exponential:
      return exponential_tail(f.coeff, f.base, start, rho, cfg);
    case SeqForm::PowerLaw:
      return powerlaw_tail(f, start, rho, cfg);
    case SeqForm::AltFactor:
      return altfactor_tail(f, start, rho, cfg);
    case SeqForm::ConvGeomGeom:
      return convgeom_tail(f, rho, cfg);
    case SeqForm::ConvExpExp:
      return exponential_tail(smul(f.coeff, f.coeff2), sadd(f.base, f.base2), start, rho, cfg);
    case SeqForm::Generic:
      return ratio_tail(rep, start, rho, cfg);
    default:
      return std::nullopt;
  }
}

}  // namespace rcgn
