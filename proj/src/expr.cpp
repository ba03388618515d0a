#include "rcgn/expr.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include <map>
#include <mutex>

#include "rcgn/gauge.hpp"

namespace rcgn {

struct EvalMemo {
  std::mutex mx;
  std::map<double, double> d;
  std::map<double, LogReal> lg;
};

namespace {

ExprPtr node(Op op, std::vector<ExprPtr> kids) {
  auto e = std::make_shared<Expr>(op);
  e->kids = std::move(kids);
  return e;
}

[[noreturn]] void singular(const Expr& e, const char* what) {
  throw EvalError(std::string(what) + " in subterm " + to_string(e));
}

double check_finite(const Expr& e, double v) {
  if (std::isnan(v)) singular(e, "indeterminate value");
  return v;
}

long long as_index(const Expr& e, double v, const char* what) {
  if (std::isnan(v)) singular(e, "indeterminate value");
  if (v < 0) singular(e, what);
  if (std::nearbyint(v) != v) singular(e, what);
  if (v > 9.0e15) throw GridTooDeep("index " + std::to_string(v) + " exceeds integer range in " + to_string(e));
  return static_cast<long long>(v);
}

// Integer-valued quantities pick up ulp-level noise through the log
// representation (exp(log(3)) != 3 exactly); integral consumers snap first.
double snap_integer(double v) {
  double r = std::nearbyint(v);
  if (std::fabs(v - r) <= 1e-9 * std::fmax(1.0, std::fabs(r))) return r;
  return v;
}

}  // namespace

ExprPtr c(double v) {
  auto e = std::make_shared<Expr>(Op::Const);
  e->cval = v;
  return e;
}
ExprPtr eps() { return node(Op::Eps, {}); }
ExprPtr var_n() { return node(Op::VarN, {}); }
ExprPtr var_x() { return node(Op::VarX, {}); }
ExprPtr gauge_ref(GaugePtr g) {
  auto e = std::make_shared<Expr>(Op::GaugeRef);
  e->name = g->name();
  e->gauge = std::move(g);
  return e;
}
ExprPtr add(ExprPtr a, ExprPtr b) { return node(Op::Add, {std::move(a), std::move(b)}); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return node(Op::Sub, {std::move(a), std::move(b)}); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return node(Op::Mul, {std::move(a), std::move(b)}); }
ExprPtr div(ExprPtr a, ExprPtr b) { return node(Op::Div, {std::move(a), std::move(b)}); }
ExprPtr pow(ExprPtr base, ExprPtr e) { return node(Op::Pow, {std::move(base), std::move(e)}); }
ExprPtr log(ExprPtr a) { return node(Op::Log, {std::move(a)}); }
ExprPtr exp(ExprPtr a) { return node(Op::Exp, {std::move(a)}); }
ExprPtr abs(ExprPtr a) { return node(Op::Abs, {std::move(a)}); }
ExprPtr neg(ExprPtr a) { return node(Op::Neg, {std::move(a)}); }
ExprPtr min(ExprPtr a, ExprPtr b) { return node(Op::Min, {std::move(a), std::move(b)}); }
ExprPtr max(ExprPtr a, ExprPtr b) { return node(Op::Max, {std::move(a), std::move(b)}); }
ExprPtr ceil(ExprPtr a) { return node(Op::Ceil, {std::move(a)}); }
ExprPtr intpart(ExprPtr a) { return node(Op::IntPart, {std::move(a)}); }
ExprPtr nint(ExprPtr a) { return node(Op::Nint, {std::move(a)}); }
ExprPtr factorial(ExprPtr a) { return node(Op::Factorial, {std::move(a)}); }
ExprPtr binom(ExprPtr n, ExprPtr k) { return node(Op::Binom, {std::move(n), std::move(k)}); }
ExprPtr piecewise(ExprPtr lhs, ExprPtr rhs, bool strict, ExprPtr then_e, ExprPtr else_e) {
  auto e = std::make_shared<Expr>(Op::Piecewise);
  e->strict = strict;
  e->kids = {std::move(lhs), std::move(rhs), std::move(then_e), std::move(else_e)};
  return e;
}
ExprPtr partial_sum(ExprPtr body, ExprPtr from, ExprPtr to) {
  auto e = std::make_shared<Expr>(Op::PartialSum);
  e->kids = {std::move(body), std::move(from), std::move(to)};
  e->memo = std::make_shared<EvalMemo>();
  return e;
}
ExprPtr convolution(ExprPtr a, ExprPtr b) {
  return node(Op::Convolution, {std::move(a), std::move(b)});
}
ExprPtr closure_net(std::string name, std::function<LogReal(double)> fn) {
  auto e = std::make_shared<Expr>(Op::Closure);
  e->name = std::move(name);
  e->closure = std::move(fn);
  e->memo = std::make_shared<EvalMemo>();
  return e;
}
ExprPtr patched_seq(std::vector<ExprPtr> values, std::vector<double> thresholds, ExprPtr bound) {
  auto e = std::make_shared<Expr>(Op::PatchedSeq);
  e->patch_values = std::move(values);
  e->patch_thresholds = std::move(thresholds);
  e->kids = {std::move(bound)};
  return e;
}

// ---- double evaluation -----------------------------------------------------

double eval_d(const Expr& e, const EvalCtx& ctx) {
  switch (e.op) {
    case Op::Const: return e.cval;
    case Op::Eps: return ctx.eps;
    case Op::VarN: return static_cast<double>(ctx.need_n("n"));
    case Op::VarX: return ctx.need_x("x");
    case Op::GaugeRef: return e.gauge->value(ctx.eps);
    case Op::Add: return check_finite(e, eval_d(e.kids[0], ctx) + eval_d(e.kids[1], ctx));
    case Op::Sub: return check_finite(e, eval_d(e.kids[0], ctx) - eval_d(e.kids[1], ctx));
    case Op::Mul: return check_finite(e, eval_d(e.kids[0], ctx) * eval_d(e.kids[1], ctx));
    case Op::Div: {
      double a = eval_d(e.kids[0], ctx), b = eval_d(e.kids[1], ctx);
      if (b == 0.0) singular(e, "division by zero");
      return check_finite(e, a / b);
    }
    case Op::Pow: {
      double b = eval_d(e.kids[0], ctx), p = eval_d(e.kids[1], ctx);
      if (b == 0.0) {
        if (p > 0) return 0.0;
        if (p == 0) return 1.0;
        singular(e, "zero base, negative exponent");
      }
      if (b < 0) {
        if (std::nearbyint(p) != p) singular(e, "negative base, fractional exponent");
        double m = std::pow(-b, p);
        return (std::fmod(std::fabs(p), 2.0) < 0.5) ? m : -m;
      }
      return check_finite(e, std::pow(b, p));
    }
    case Op::Log: {
      double a = eval_d(e.kids[0], ctx);
      if (a <= 0.0) singular(e, "log of non-positive value");
      return std::log(a);
    }
    case Op::Exp: return std::exp(eval_d(e.kids[0], ctx));
    case Op::Abs: return std::fabs(eval_d(e.kids[0], ctx));
    case Op::Neg: return -eval_d(e.kids[0], ctx);
    case Op::Min: return std::fmin(eval_d(e.kids[0], ctx), eval_d(e.kids[1], ctx));
    case Op::Max: return std::fmax(eval_d(e.kids[0], ctx), eval_d(e.kids[1], ctx));
    case Op::Ceil: return std::ceil(eval_d(e.kids[0], ctx));
    case Op::IntPart: return std::trunc(eval_d(e.kids[0], ctx));
    case Op::Nint: return std::round(eval_d(e.kids[0], ctx));  // half away from zero
    case Op::Factorial: {
      double v = eval_d(e.kids[0], ctx);
      if (v < 0 || (v < 9.0e15 && std::nearbyint(v) != v)) singular(e, "factorial of non-natural");
      if (v > 170.0) return std::numeric_limits<double>::infinity();
      return std::nearbyint(std::tgamma(v + 1.0));
    }
    case Op::Binom: {
      double nv = eval_d(e.kids[0], ctx), kv = eval_d(e.kids[1], ctx);
      if (nv < 0 || std::nearbyint(nv) != nv || std::nearbyint(kv) != kv)
        singular(e, "binomial of non-naturals");
      if (kv < 0 || kv > nv) return 0.0;
      double lg = std::lgamma(nv + 1.0) - std::lgamma(kv + 1.0) - std::lgamma(nv - kv + 1.0);
      double v = std::exp(lg);
      return (v < 9.0e15) ? std::nearbyint(v) : v;
    }
    case Op::Piecewise: {
      double l = eval_d(e.kids[0], ctx), r = eval_d(e.kids[1], ctx);
      bool cond = e.strict ? (l < r) : (l <= r);
      return eval_d(cond ? e.kids[2] : e.kids[3], ctx);
    }
    case Op::PartialSum: {
      if (e.memo) {
        std::lock_guard<std::mutex> lock(e.memo->mx);
        auto it = e.memo->d.find(ctx.eps);
        if (it != e.memo->d.end()) return it->second;
      }
      double fv = eval_d(e.kids[1], ctx), tv = eval_d(e.kids[2], ctx);
      double out;
      if (tv < fv) {
        out = 0.0;
      } else {
        long long from = as_index(e, fv, "sum bound must be a natural number");
        long long to = as_index(e, tv, "sum bound must be a natural number");
        Config fallback;
        out = window_sum(e.kids[0], ctx.eps, from, to, ctx.cfg ? *ctx.cfg : fallback);
      }
      if (e.memo) {
        std::lock_guard<std::mutex> lock(e.memo->mx);
        e.memo->d[ctx.eps] = out;
      }
      return out;
    }
    case Op::Convolution: {
      long long n = ctx.need_n("convolution");
      if (n > ctx.cap()) throw GridTooDeep("convolution index beyond cap");
      double s = 0.0, comp = 0.0;
      EvalCtx sub = ctx;
      for (long long k = 0; k <= n; ++k) {
        sub.n = k;
        double a = eval_d(e.kids[0], sub);
        sub.n = n - k;
        double b = eval_d(e.kids[1], sub);
        if (!std::isfinite(s)) {
          s += a * b;
          continue;
        }
        double y = a * b - comp;
        double t = s + y;
        if (!std::isfinite(t)) {
          s = t;
          comp = 0.0;
          continue;
        }
        comp = (t - s) - y;
        s = t;
      }
      return check_finite(e, s);
    }
    case Op::Closure: return eval_lg(e, ctx).to_double();
    case Op::PatchedSeq: {
      size_t n = static_cast<size_t>(ctx.need_n("patched sequence"));
      if (n < e.patch_values.size() && ctx.eps <= e.patch_thresholds[n])
        return eval_d(e.patch_values[n], ctx);
      return eval_d(e.kids[0], ctx);
    }
  }
  throw EvalError("unhandled node");
}

// ---- signed-log evaluation ---------------------------------------------------

LogReal eval_lg(const Expr& e, const EvalCtx& ctx) {
  switch (e.op) {
    case Op::Const: return LogReal::from_double(e.cval);
    case Op::Eps: return LogReal::from_double(ctx.eps);
    case Op::VarN: return LogReal::from_double(static_cast<double>(ctx.need_n("n")));
    case Op::VarX: return LogReal::from_double(ctx.need_x("x"));
    case Op::GaugeRef: return LogReal{1, e.gauge->log_value(ctx.eps)};
    case Op::Add: return eval_lg(e.kids[0], ctx) + eval_lg(e.kids[1], ctx);
    case Op::Sub: return eval_lg(e.kids[0], ctx) - eval_lg(e.kids[1], ctx);
    case Op::Mul: return eval_lg(e.kids[0], ctx) * eval_lg(e.kids[1], ctx);
    case Op::Div: {
      LogReal b = eval_lg(e.kids[1], ctx);
      if (b.is_zero()) singular(e, "division by zero");
      return eval_lg(e.kids[0], ctx) / b;
    }
    case Op::Pow: {
      LogReal b = eval_lg(e.kids[0], ctx);
      double p = eval_lg(e.kids[1], ctx).to_double();
      if (b.sgn < 0) p = snap_integer(p);
      try {
        return pow(b, p);
      } catch (const DomainError& err) {
        singular(e, err.what());
      }
    }
    case Op::Log: {
      LogReal a = eval_lg(e.kids[0], ctx);
      if (a.sgn <= 0) singular(e, "log of non-positive value");
      return log(a);
    }
    case Op::Exp: return exp(eval_lg(e.kids[0], ctx));
    case Op::Abs: return eval_lg(e.kids[0], ctx).abs();
    case Op::Neg: return -eval_lg(e.kids[0], ctx);
    case Op::Min: return min(eval_lg(e.kids[0], ctx), eval_lg(e.kids[1], ctx));
    case Op::Max: return max(eval_lg(e.kids[0], ctx), eval_lg(e.kids[1], ctx));
    case Op::Ceil:
    case Op::IntPart:
    case Op::Nint: {
      LogReal a = eval_lg(e.kids[0], ctx);
      if (a.is_zero()) return a;
      if (a.lg > 36.8) return a;  // |v| > ~1e16: rounding does not move it
      double v = snap_integer(a.to_double());
      if (v == 0.0 && a.sgn != 0) {  // underflowed: |value| positive but below double range
        if (e.op == Op::Ceil && a.sgn > 0) return LogReal::one();
        return LogReal::zero();
      }
      double r = e.op == Op::Ceil ? std::ceil(v) : e.op == Op::IntPart ? std::trunc(v) : std::round(v);
      return LogReal::from_double(r);
    }
    case Op::Factorial: {
      LogReal a = eval_lg(e.kids[0], ctx);
      if (a.sgn < 0) singular(e, "factorial of non-natural");
      double v = snap_integer(a.to_double());
      if (v < 9.0e15 && std::nearbyint(v) != v) singular(e, "factorial of non-natural");
      return LogReal{1, std::lgamma(v + 1.0)};
    }
    case Op::Binom: {
      double nv = snap_integer(eval_lg(e.kids[0], ctx).to_double());
      double kv = snap_integer(eval_lg(e.kids[1], ctx).to_double());
      if (kv < 0 || kv > nv) return LogReal::zero();
      return LogReal{1, std::lgamma(nv + 1.0) - std::lgamma(kv + 1.0) - std::lgamma(nv - kv + 1.0)};
    }
    case Op::Piecewise: {
      LogReal l = eval_lg(e.kids[0], ctx), r = eval_lg(e.kids[1], ctx);
      bool cond = e.strict ? (l < r) : (l <= r);
      return eval_lg(cond ? e.kids[2] : e.kids[3], ctx);
    }
    case Op::PartialSum: {
      if (e.memo) {
        std::lock_guard<std::mutex> lock(e.memo->mx);
        auto it = e.memo->lg.find(ctx.eps);
        if (it != e.memo->lg.end()) return it->second;
      }
      double fv = snap_integer(eval_lg(e.kids[1], ctx).to_double());
      double tv = snap_integer(eval_lg(e.kids[2], ctx).to_double());
      LogReal s = LogReal::zero();
      if (tv >= fv) {
        long long from = as_index(e, fv, "sum bound must be a natural number");
        long long to = as_index(e, tv, "sum bound must be a natural number");
        if (to - from + 1 > ctx.cap())
          throw GridTooDeep("grid too deep: " + std::to_string(to - from + 1) + " summands");
        EvalCtx sub = ctx;
        for (long long n = from; n <= to; ++n) {
          sub.n = n;
          s = s + eval_lg(e.kids[0], sub);
        }
      }
      if (e.memo) {
        std::lock_guard<std::mutex> lock(e.memo->mx);
        e.memo->lg[ctx.eps] = s;
      }
      return s;
    }
    case Op::Convolution: {
      long long n = ctx.need_n("convolution");
      if (n > ctx.cap()) throw GridTooDeep("convolution index beyond cap");
      LogReal s = LogReal::zero();
      EvalCtx sub = ctx;
      for (long long k = 0; k <= n; ++k) {
        sub.n = k;
        LogReal a = eval_lg(e.kids[0], sub);
        sub.n = n - k;
        s = s + a * eval_lg(e.kids[1], sub);
      }
      return s;
    }
    case Op::Closure: {
      if (e.memo) {
        std::lock_guard<std::mutex> lock(e.memo->mx);
        auto it = e.memo->lg.find(ctx.eps);
        if (it != e.memo->lg.end()) return it->second;
      }
      LogReal v = e.closure(ctx.eps);
      if (e.memo) {
        std::lock_guard<std::mutex> lock(e.memo->mx);
        e.memo->lg[ctx.eps] = v;
      }
      return v;
    }
    case Op::PatchedSeq: {
      size_t n = static_cast<size_t>(ctx.need_n("patched sequence"));
      if (n < e.patch_values.size() && ctx.eps <= e.patch_thresholds[n])
        return eval_lg(e.patch_values[n], ctx);
      return eval_lg(e.kids[0], ctx);
    }
  }
  throw EvalError("unhandled node");
}

// ---- structure ---------------------------------------------------------------

bool equal(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.kids.size() != b.kids.size()) return false;
  switch (a.op) {
    case Op::Const:
      if (a.cval != b.cval) return false;
      break;
    case Op::GaugeRef:
      if (a.gauge != b.gauge) return false;
      break;
    case Op::Piecewise:
      if (a.strict != b.strict) return false;
      break;
    case Op::Closure:
      return a.closure.target_type() == b.closure.target_type() && a.name == b.name;
    case Op::PatchedSeq: {
      if (a.patch_thresholds != b.patch_thresholds) return false;
      if (a.patch_values.size() != b.patch_values.size()) return false;
      for (size_t i = 0; i < a.patch_values.size(); ++i)
        if (!equal(*a.patch_values[i], *b.patch_values[i])) return false;
      break;
    }
    default:
      break;
  }
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Expr& e, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print(*e.kids[0], out);
    out += ' ';
    out += op;
    out += ' ';
    print(*e.kids[1], out);
    out += ')';
  };
  auto call = [&](const char* fn) {
    out += fn;
    out += '(';
    for (size_t i = 0; i < e.kids.size(); ++i) {
      if (i) out += ", ";
      print(*e.kids[i], out);
    }
    out += ')';
  };
  switch (e.op) {
    case Op::Const: out += fmt_num(e.cval); return;
    case Op::Eps: out += "eps"; return;
    case Op::VarN: out += "n"; return;
    case Op::VarX: out += "x"; return;
    case Op::GaugeRef: out += e.name; return;
    case Op::Add: bin("+"); return;
    case Op::Sub: bin("-"); return;
    case Op::Mul: bin("*"); return;
    case Op::Div: bin("/"); return;
    case Op::Pow: call("pow"); return;
    case Op::Log: call("log"); return;
    case Op::Exp: call("exp"); return;
    case Op::Abs: call("abs"); return;
    case Op::Neg:
      out += "(-";
      print(*e.kids[0], out);
      out += ')';
      return;
    case Op::Min: call("min"); return;
    case Op::Max: call("max"); return;
    case Op::Ceil: call("ceil"); return;
    case Op::IntPart: call("intpart"); return;
    case Op::Nint: call("nint"); return;
    case Op::Factorial: call("factorial"); return;
    case Op::Binom: call("binom"); return;
    case Op::Piecewise:
      out += "pc(";
      print(*e.kids[0], out);
      out += e.strict ? " < " : " <= ";
      print(*e.kids[1], out);
      out += ", ";
      print(*e.kids[2], out);
      out += ", ";
      print(*e.kids[3], out);
      out += ')';
      return;
    case Op::PartialSum: call("@sum"); return;
    case Op::Convolution: call("@conv"); return;
    case Op::Closure:
      out += "@net:";
      out += e.name;
      return;
    case Op::PatchedSeq:
      out += "@patched[";
      out += std::to_string(e.patch_values.size());
      out += "]";
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool contains(const Expr& e, Op what) {
  if (e.op == what) return true;
  for (const auto& k : e.kids)
    if (contains(*k, what)) return true;
  if (e.op == Op::PatchedSeq)
    for (const auto& v : e.patch_values)
      if (contains(*v, what)) return true;
  return false;
}

ExprPtr subst_n(const ExprPtr& e, const ExprPtr& repl) {
  if (e->op == Op::VarN) return repl;
  bool changed = false;
  auto out = std::make_shared<Expr>(*e);
  for (auto& k : out->kids) {
    ExprPtr nk = subst_n(k, repl);
    if (nk != k) {
      k = nk;
      changed = true;
    }
  }
  for (auto& v : out->patch_values) {
    ExprPtr nv = subst_n(v, repl);
    if (nv != v) {
      v = nv;
      changed = true;
    }
  }
  return changed ? ExprPtr(out) : e;
}

ExprPtr shift_n(const ExprPtr& e, long long k) {
  if (k == 0) return e;
  return subst_n(e, add(var_n(), c(static_cast<double>(k))));
}

std::vector<double> prefix_sums_at(const ExprPtr& body, double eps_v, long long start,
                                   const std::vector<long long>& targets, const Config& cfg) {
  std::vector<double> out;
  out.reserve(targets.size());
  if (targets.empty()) return out;
  long long last = targets.back();
  if (last - start + 1 > cfg.sum_cap)
    throw GridTooDeep("grid too deep: " + std::to_string(last - start + 1) + " summands");
  EvalCtx ctx{eps_v, std::nullopt, std::nullopt, &cfg};
  double s = 0.0, comp = 0.0;
  size_t ti = 0;
  while (ti < targets.size() && targets[ti] < start) {
    out.push_back(0.0);  // window entirely below start: empty sum
    ++ti;
  }
  for (long long n = start; n <= last && ti < targets.size(); ++n) {
    ctx.n = n;
    double v = eval_d(body, ctx);
    if (!std::isfinite(s)) {
      s += v;
    } else {
      double y = v - comp;
      double t = s + y;
      if (!std::isfinite(t)) {
        s = t;
        comp = 0.0;
      } else {
        comp = (t - s) - y;
        s = t;
      }
    }
    while (ti < targets.size() && targets[ti] == n) {
      out.push_back(s);
      ++ti;
    }
  }
  return out;
}

double window_sum(const ExprPtr& body, double eps_v, long long from, long long to,
                  const Config& cfg) {
  if (to < from) return 0.0;
  if (to - from + 1 > cfg.sum_cap)
    throw GridTooDeep("grid too deep: " + std::to_string(to - from + 1) + " summands");
  EvalCtx ctx{eps_v, std::nullopt, std::nullopt, &cfg};
  double s = 0.0, comp = 0.0;
  for (long long n = from; n <= to; ++n) {
    ctx.n = n;
    double v = eval_d(body, ctx);
    if (!std::isfinite(s)) {  // saturated: compensation would produce NaN
      s += v;
      continue;
    }
    double y = v - comp;
    double t = s + y;
    if (!std::isfinite(t)) {
      s = t;
      comp = 0.0;
      continue;
    }
    comp = (t - s) - y;
    s = t;
  }
  if (std::isnan(s)) throw EvalError("indeterminate saturated sum");
  return s;
}

}  // namespace rcgn
