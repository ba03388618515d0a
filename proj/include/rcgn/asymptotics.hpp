#ifndef RCGN_ASYMPTOTICS_HPP
#define RCGN_ASYMPTOTICS_HPP

#include <optional>

#include "rcgn/expr.hpp"
#include "rcgn/gauge.hpp"

namespace rcgn {

//! Asymptotic magnitude class of an eps-net as eps -> 0+:
//!
//!   |x_eps| ~ |coeff| * exp(ec * eps^{-eb} * L^{el}) * eps^p * L^lp * LL^llp
//!
//! with L = log(1/eps), LL = log L. The exp slot is active iff ec != 0
//! (then eb > 0). `tower` marks nets whose log-magnitude outgrows every
//! eps^{-b} L^c (e.g. exp(exp(1/eps))); tower_sign = +1 grows, -1 decays.
//!
//! Limits computed from a class are exact: wherever the grammar walks
//! outside this normal form the analysis returns nullopt and callers fall
//! back to the sample grid.
struct MagClass {
  bool tower = false;
  int tower_sign = 0;
  double ec = 0, eb = 0, el = 0;
  double p = 0;
  double lp = 0, llp = 0;
  double coeff = 1;

  bool is_zero() const { return !tower && coeff == 0; }
  static MagClass zero() { MagClass m; m.coeff = 0; return m; }
  static MagClass constant(double c) { MagClass m; m.coeff = c; return m; }
};

//! nullopt when the expression leaves the decidable normal form
//! (free n or x, engine-built nets, non-representable combinations).
std::optional<MagClass> mag_class(const Expr& e);
inline std::optional<MagClass> mag_class(const ExprPtr& e) { return mag_class(*e); }

//! magnitude dominance as eps -> 0+: -1 iff |a| << |b|, +1 iff |a| >> |b|,
//! 0 when both lie in the same class (coefficients not compared).
int cmp_growth(const MagClass& a, const MagClass& b);

//! signed eventual comparison: -1 iff a < b eventually, 0 same class and
//! coefficient, +1 iff a > b eventually; nullopt when not decidable.
std::optional<int> cmp_signed(const MagClass& a, const MagClass& b);

struct SymValuation {
  enum Kind { Finite, PlusInf, MinusInf } kind = Finite;
  double v = 0;
  static SymValuation finite(double x) { return SymValuation{Finite, x}; }
  static SymValuation plus_inf() { return SymValuation{PlusInf, 0}; }
  static SymValuation minus_inf() { return SymValuation{MinusInf, 0}; }
};

//! v = lim log|x_eps| / log rho_eps, the exponent scale behind
//! moderateness and negligibility. +inf encodes negligible-like decay.
std::optional<SymValuation> sym_valuation(const MagClass& x, const Gauge& rho);

std::optional<SymValuation> sym_valuation_of(const ExprPtr& x, const Gauge& rho);

}  // namespace rcgn

#endif  // RCGN_ASYMPTOTICS_HPP
