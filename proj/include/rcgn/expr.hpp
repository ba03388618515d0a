#ifndef RCGN_EXPR_HPP
#define RCGN_EXPR_HPP

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcgn/config.hpp"
#include "rcgn/logreal.hpp"

namespace rcgn {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Raised when a per-eps summation would exceed Config::sum_cap.
struct GridTooDeep : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Gauge;
using GaugePtr = std::shared_ptr<const Gauge>;

enum class Op {
  Const,      // cval
  Eps,        // the net variable
  VarN,       // sequence index (integer)
  VarX,       // quadrature variable
  GaugeRef,   // named gauge, evaluated through the Gauge object
  Add, Sub, Mul, Div,
  Pow,        // kids: base, exponent (exponent may itself be a net / contain n)
  Log, Exp, Abs, Neg,
  Min, Max,
  Ceil,       // toward +inf
  IntPart,    // toward zero
  Nint,       // nearest, half away from zero
  Factorial,  // kids[0] must evaluate to an integer >= 0
  Binom,      // kids: n, k (integers)
  Piecewise,  // kids: lhs, rhs, then, else; condition lhs (<|<=) rhs
  PartialSum, // kids: body(n), from, to; eps-wise sum over n
  Convolution,// kids: bodyA(n), bodyB(n); value at n = sum_k A_k B_{n-k}
  Closure,    // engine-built net, eval through stored function
  PatchedSeq, // bounded-sequence patch: listed reps below thresholds, bound above
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
struct EvalMemo;

struct EvalCtx {
  double eps = 0.5;
  std::optional<long long> n;
  std::optional<double> x;
  const Config* cfg = nullptr;

  long long need_n(const char* who) const {
    if (!n) throw EvalError(std::string(who) + ": no sequence index bound");
    return *n;
  }
  double need_x(const char* who) const {
    if (!x) throw EvalError(std::string(who) + ": no function variable bound");
    return *x;
  }
  long long cap() const { return cfg ? cfg->sum_cap : 10000000LL; }
};

struct Expr {
  Op op = Op::Const;
  double cval = 0.0;
  std::string name;                     // GaugeRef / Closure label
  GaugePtr gauge;                       // GaugeRef
  bool strict = false;                  // Piecewise: lhs < rhs instead of <=
  std::vector<ExprPtr> kids;
  std::function<LogReal(double)> closure;
  // PatchedSeq payload
  std::vector<ExprPtr> patch_values;    // per-n representatives
  std::vector<double> patch_thresholds; // eps_0n: use value below, bound above
  // summation nodes are pure in eps and get resampled at the same grid
  // points; the memo turns repeated sweeps into one pass
  std::shared_ptr<EvalMemo> memo;

  Expr() = default;
  explicit Expr(Op o) : op(o) {}
};

// ---- builders ------------------------------------------------------------

ExprPtr c(double v);
ExprPtr eps();
ExprPtr var_n();
ExprPtr var_x();
ExprPtr gauge_ref(GaugePtr g);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr base, ExprPtr e);
ExprPtr log(ExprPtr a);
ExprPtr exp(ExprPtr a);
ExprPtr abs(ExprPtr a);
ExprPtr neg(ExprPtr a);
ExprPtr min(ExprPtr a, ExprPtr b);
ExprPtr max(ExprPtr a, ExprPtr b);
ExprPtr ceil(ExprPtr a);
ExprPtr intpart(ExprPtr a);
ExprPtr nint(ExprPtr a);
ExprPtr factorial(ExprPtr a);
ExprPtr binom(ExprPtr n, ExprPtr k);
ExprPtr piecewise(ExprPtr lhs, ExprPtr rhs, bool strict, ExprPtr then_e, ExprPtr else_e);
ExprPtr partial_sum(ExprPtr body, ExprPtr from, ExprPtr to);
ExprPtr convolution(ExprPtr a, ExprPtr b);
ExprPtr closure_net(std::string name, std::function<LogReal(double)> fn);
ExprPtr patched_seq(std::vector<ExprPtr> values, std::vector<double> thresholds, ExprPtr bound);

// ---- evaluation ----------------------------------------------------------

//! Plain double evaluation; throws EvalError at singularities (naming the
//! offending subterm) and GridTooDeep when a summation exceeds the cap.
double eval_d(const Expr& e, const EvalCtx& ctx);
inline double eval_d(const ExprPtr& e, const EvalCtx& ctx) { return eval_d(*e, ctx); }

//! Signed-log evaluation; total on magnitudes far outside double range.
LogReal eval_lg(const Expr& e, const EvalCtx& ctx);
inline LogReal eval_lg(const ExprPtr& e, const EvalCtx& ctx) { return eval_lg(*e, ctx); }

// ---- structure -----------------------------------------------------------

bool equal(const Expr& a, const Expr& b);
inline bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }

std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

bool contains(const Expr& e, Op what);
inline bool contains_n(const Expr& e) { return contains(e, Op::VarN); }
inline bool contains_n(const ExprPtr& e) { return contains(*e, Op::VarN); }

//! Replace every VarN by `repl` (used for extension to hypernaturals and
//! for index shifts).
ExprPtr subst_n(const ExprPtr& e, const ExprPtr& repl);

//! body with n shifted: n -> n + k
ExprPtr shift_n(const ExprPtr& e, long long k);

//! Checkpointed compensated prefix sums: one Kahan pass over
//! n = start..targets.back() evaluating `body` at (n, eps), recording the
//! running sum at each target index. Targets must be sorted ascending.
//! Respects the summation cap.
std::vector<double> prefix_sums_at(const ExprPtr& body, double eps_v, long long start,
                                   const std::vector<long long>& targets, const Config& cfg);

//! Single window sum n = from..to (empty when to < from), Kahan-compensated.
double window_sum(const ExprPtr& body, double eps_v, long long from, long long to,
                  const Config& cfg);

}  // namespace rcgn

#endif  // RCGN_EXPR_HPP
