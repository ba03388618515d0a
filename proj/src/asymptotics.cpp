#include "rcgn/asymptotics.hpp"

#include <cmath>

namespace rcgn {

namespace {

using OptMag = std::optional<MagClass>;

bool exp_active(const MagClass& m) { return m.ec != 0.0; }

// dominance key of the exp slot; inactive slots rank lowest
int cmp_exp_key(const MagClass& a, const MagClass& b) {
  double ka[2] = {exp_active(a) ? a.eb : -1e300, a.el};
  double kb[2] = {exp_active(b) ? b.eb : -1e300, b.el};
  if (ka[0] != kb[0]) return ka[0] < kb[0] ? -1 : 1;
  if (!exp_active(a) && !exp_active(b)) return 0;
  if (ka[1] != kb[1]) return ka[1] < kb[1] ? -1 : 1;
  return 0;
}

OptMag invert(const MagClass& a) {
  if (a.is_zero()) return std::nullopt;
  if (a.tower) {
    MagClass r = a;
    r.tower_sign = -a.tower_sign;
    r.coeff = 1.0 / a.coeff;
    return r;
  }
  MagClass r;
  r.ec = -a.ec;
  r.eb = a.eb;
  r.el = a.el;
  r.p = -a.p;
  r.lp = -a.lp;
  r.llp = -a.llp;
  r.coeff = 1.0 / a.coeff;
  return r;
}

OptMag class_mul(const MagClass& a, const MagClass& b) {
  if (a.is_zero() || b.is_zero()) return MagClass::zero();
  if (a.tower || b.tower) {
    if (a.tower && b.tower && a.tower_sign != b.tower_sign) return std::nullopt;
    MagClass r = a.tower ? a : b;
    r.coeff = a.coeff * b.coeff;
    return r;
  }
  MagClass r;
  if (exp_active(a) && exp_active(b)) {
    int k = cmp_exp_key(a, b);
    if (k == 0) {
      r.ec = a.ec + b.ec;
      r.eb = a.eb;
      r.el = a.el;
      if (r.ec == 0.0) r.eb = r.el = 0.0;
    } else {
      const MagClass& d = k > 0 ? a : b;  // dominant exp term wins
      r.ec = d.ec;
      r.eb = d.eb;
      r.el = d.el;
    }
  } else if (exp_active(a) || exp_active(b)) {
    const MagClass& d = exp_active(a) ? a : b;
    r.ec = d.ec;
    r.eb = d.eb;
    r.el = d.el;
  }
  r.p = a.p + b.p;
  r.lp = a.lp + b.lp;
  r.llp = a.llp + b.llp;
  r.coeff = a.coeff * b.coeff;
  return r;
}

OptMag class_pow(const MagClass& a, double e) {
  if (a.is_zero()) {
    if (e > 0) return MagClass::zero();
    return std::nullopt;
  }
  if (a.coeff < 0 && std::nearbyint(e) != e) return std::nullopt;
  MagClass r = a;
  r.ec *= e;
  r.eb = r.ec == 0 ? 0 : a.eb;
  r.el = r.ec == 0 ? 0 : a.el;
  r.p *= e;
  r.lp *= e;
  r.llp *= e;
  r.coeff = (a.coeff < 0 && std::fmod(std::fabs(e), 2.0) >= 0.5) ? -std::pow(-a.coeff, e)
                                                                 : std::pow(std::fabs(a.coeff), e);
  if (a.tower) r.tower_sign = e > 0 ? a.tower_sign : -a.tower_sign;
  return r;
}

OptMag class_log(const MagClass& a) {
  if (a.is_zero() || a.coeff < 0 || a.tower) return std::nullopt;
  MagClass r;
  if (exp_active(a)) {  // log x ~ ec * eps^{-eb} * L^{el}
    r.p = -a.eb;
    r.lp = a.el;
    r.coeff = a.ec;
    return r;
  }
  if (a.p != 0) {  // log x ~ -p * L
    r.lp = 1;
    r.coeff = -a.p;
    return r;
  }
  if (a.lp != 0) {  // log x ~ lp * LL
    r.llp = 1;
    r.coeff = a.lp;
    return r;
  }
  if (a.llp != 0) return std::nullopt;  // log LL is outside the basis
  if (a.coeff == 1.0) return MagClass::zero();
  return MagClass::constant(std::log(a.coeff));
}

OptMag class_exp(const MagClass& x) {
  if (x.is_zero()) return MagClass::constant(1.0);
  if (x.tower) {
    if (x.tower_sign < 0) return MagClass::constant(1.0);
    MagClass r;
    r.tower = true;
    r.tower_sign = x.coeff > 0 ? 1 : -1;  // sign of the exponent drives growth/decay
    return r;
  }
  if (exp_active(x)) {
    if (x.ec < 0) return MagClass::constant(1.0);  // |x| -> 0
    MagClass r;  // exp of something of exponential size: a tower
    r.tower = true;
    r.tower_sign = x.coeff > 0 ? 1 : -1;  // the value's sign drives growth vs decay
    return r;
  }
  if (x.p > 0) return MagClass::constant(1.0);  // x -> 0
  if (x.p < 0) {                                // x ~ coeff * eps^{p} * L^{lp}
    if (x.llp != 0) return std::nullopt;
    MagClass r;
    r.ec = x.coeff;
    r.eb = -x.p;
    r.el = x.lp;
    return r;
  }
  // p == 0
  if (x.lp == 1.0 && x.llp == 0.0) {  // exp(c*L) = eps^{-c}
    MagClass r;
    r.p = -x.coeff;
    return r;
  }
  if (x.lp != 0) return std::nullopt;
  if (x.llp == 1.0) {  // exp(c*LL) = L^c
    MagClass r;
    r.lp = x.coeff;
    return r;
  }
  if (x.llp != 0) return std::nullopt;
  return MagClass::constant(std::exp(x.coeff));  // constant argument
}

OptMag class_add(const MagClass& a, const MagClass& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int g = cmp_growth(a, b);
  if (g > 0) return a;
  if (g < 0) return b;
  // same class: coefficients add; exact cancellation is undecidable here
  MagClass r = a;
  r.coeff = a.coeff + b.coeff;
  if (r.coeff == 0.0) return std::nullopt;
  return r;
}

OptMag gauge_class(const Gauge& g) {
  switch (g.family()) {
    case GaugeFamily::Identity: {
      MagClass m;
      m.p = 1;
      return m;
    }
    case GaugeFamily::Power: {
      MagClass m;
      m.p = g.param();
      return m;
    }
    case GaugeFamily::ExpInv: {
      MagClass m;
      m.ec = -1;
      m.eb = g.param();
      return m;
    }
    case GaugeFamily::LogLog: {
      auto base = g.base()->lambda_class();
      if (!base) return std::nullopt;
      MagClass m;
      if (base->rung == 1) {  // 1 / log(coeff * L) ~ LL^{-1}
        m.llp = -1;
        return m;
      }
      if (base->rung == 2 && base->el == 0) {  // 1 / log(coeff * eps^{-b}) ~ 1/(b L)
        m.lp = -1;
        m.coeff = 1.0 / base->b;
        return m;
      }
      return std::nullopt;
    }
    case GaugeFamily::Custom:
      return mag_class(*g.net());
    case GaugeFamily::Derived:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

int cmp_growth(const MagClass& a, const MagClass& b) {
  if (a.tower || b.tower) {
    int sa = a.tower ? a.tower_sign : 0;
    int sb = b.tower ? b.tower_sign : 0;
    if (sa == sb) return 0;  // two towers: conservatively the same
    if (sa == 1 || sb == -1) return 1;
    return -1;
  }
  if (exp_active(a) || exp_active(b)) {
    int k = cmp_exp_key(a, b);
    if (k != 0) {
      const MagClass& d = k > 0 ? a : b;
      int s = d.ec > 0 ? 1 : -1;
      return k > 0 ? s : -s;
    }
    if (exp_active(a)) {  // equal keys
      if (a.ec != b.ec) return a.ec > b.ec ? 1 : -1;
    } else if (exp_active(a) != exp_active(b)) {
      const MagClass& d = exp_active(a) ? a : b;
      int s = d.ec > 0 ? 1 : -1;
      return exp_active(a) ? s : -s;
    }
  }
  if (a.p != b.p) return a.p < b.p ? 1 : -1;  // smaller eps-power is larger
  if (a.lp != b.lp) return a.lp > b.lp ? 1 : -1;
  if (a.llp != b.llp) return a.llp > b.llp ? 1 : -1;
  return 0;
}

std::optional<int> cmp_signed(const MagClass& a, const MagClass& b) {
  if (a.is_zero() && b.is_zero()) return 0;
  int sa = a.is_zero() ? 0 : (a.tower ? (a.coeff >= 0 ? 1 : -1) : (a.coeff > 0 ? 1 : -1));
  int sb = b.is_zero() ? 0 : (b.tower ? (b.coeff >= 0 ? 1 : -1) : (b.coeff > 0 ? 1 : -1));
  if (sa != sb) return sa < sb ? -1 : 1;
  int g = cmp_growth(a, b);
  if (g == 0) {
    if (a.tower || b.tower) return std::nullopt;
    if (a.coeff == b.coeff) return 0;
    return a.coeff < b.coeff ? -1 : 1;
  }
  // same sign: the dominant one decides
  const bool a_dominates = g > 0;
  if (sa > 0) return a_dominates ? 1 : -1;
  return a_dominates ? -1 : 1;
}

std::optional<MagClass> mag_class(const Expr& e) {
  switch (e.op) {
    case Op::Const:
      return MagClass::constant(e.cval);
    case Op::Eps: {
      MagClass m;
      m.p = 1;
      return m;
    }
    case Op::VarN:
    case Op::VarX:
      return std::nullopt;
    case Op::GaugeRef:
      return gauge_class(*e.gauge);
    case Op::Add: {
      auto a = mag_class(*e.kids[0]), b = mag_class(*e.kids[1]);
      if (!a || !b) return std::nullopt;
      return class_add(*a, *b);
    }
    case Op::Sub: {
      if (equal(*e.kids[0], *e.kids[1])) return MagClass::zero();
      auto a = mag_class(*e.kids[0]), b = mag_class(*e.kids[1]);
      if (!a || !b) return std::nullopt;
      MagClass nb = *b;
      nb.coeff = -nb.coeff;
      return class_add(*a, nb);
    }
    case Op::Mul: {
      auto a = mag_class(*e.kids[0]), b = mag_class(*e.kids[1]);
      if (!a || !b) return std::nullopt;
      return class_mul(*a, *b);
    }
    case Op::Div: {
      auto a = mag_class(*e.kids[0]), b = mag_class(*e.kids[1]);
      if (!a || !b) return std::nullopt;
      auto ib = invert(*b);
      if (!ib) return std::nullopt;
      return class_mul(*a, *ib);
    }
    case Op::Pow: {
      auto base = mag_class(*e.kids[0]);
      if (!base) return std::nullopt;
      auto ex = mag_class(*e.kids[1]);
      if (!ex) return std::nullopt;
      bool const_exp = !ex->tower && ex->ec == 0 && ex->p == 0 && ex->lp == 0 && ex->llp == 0;
      if (const_exp) return class_pow(*base, ex->coeff);
      // net exponent: x^y = exp(y * log x)
      auto lx = class_log(*base);
      if (!lx) return std::nullopt;
      auto prod = class_mul(*ex, *lx);
      if (!prod) return std::nullopt;
      return class_exp(*prod);
    }
    case Op::Log: {
      auto a = mag_class(*e.kids[0]);
      if (!a) return std::nullopt;
      return class_log(*a);
    }
    case Op::Exp: {
      auto a = mag_class(*e.kids[0]);
      if (!a) return std::nullopt;
      return class_exp(*a);
    }
    case Op::Abs: {
      auto a = mag_class(*e.kids[0]);
      if (!a) return std::nullopt;
      MagClass r = *a;
      r.coeff = std::fabs(r.coeff);
      return r;
    }
    case Op::Neg: {
      auto a = mag_class(*e.kids[0]);
      if (!a) return std::nullopt;
      MagClass r = *a;
      r.coeff = -r.coeff;
      return r;
    }
    case Op::Min:
    case Op::Max: {
      auto a = mag_class(*e.kids[0]), b = mag_class(*e.kids[1]);
      if (!a || !b) return std::nullopt;
      auto s = cmp_signed(*a, *b);
      if (!s) return std::nullopt;
      bool take_a = (e.op == Op::Min) ? *s <= 0 : *s >= 0;
      return take_a ? a : b;
    }
    case Op::Ceil:
    case Op::IntPart:
    case Op::Nint: {
      auto a = mag_class(*e.kids[0]);
      if (!a || a->tower) return std::nullopt;
      if (a->is_zero()) return MagClass::zero();
      int vs_one = cmp_growth(*a, MagClass::constant(1.0));
      if (vs_one > 0) return a;  // rounding is lower order on growing nets
      if (vs_one < 0) {          // |x| -> 0
        if (e.op == Op::Ceil && a->coeff > 0) return MagClass::constant(1.0);
        return MagClass::zero();
      }
      return std::nullopt;  // constant-scale arguments: boundary-sensitive
    }
    case Op::Factorial: {
      auto a = mag_class(*e.kids[0]);
      if (!a) return std::nullopt;
      if (!a->tower && !exp_active(*a) && a->p < 0 && a->lp == 0 && a->llp == 0 && a->coeff > 0) {
        MagClass r;  // lgamma(x) ~ x log x ~ coeff * b * eps^{-b} * L
        r.ec = a->coeff * (-a->p);
        r.eb = -a->p;
        r.el = 1;
        return r;
      }
      return std::nullopt;
    }
    case Op::Binom:
      return std::nullopt;
    case Op::Piecewise: {
      auto t = mag_class(*e.kids[2]), f = mag_class(*e.kids[3]);
      if (!t || !f) return std::nullopt;
      auto l = mag_class(*e.kids[0]), r = mag_class(*e.kids[1]);
      if (l && r) {
        auto s = cmp_signed(*l, *r);
        if (s && *s != 0) return *s < 0 ? t : f;  // condition eventually settled
      }
      int g = cmp_growth(*t, *f);
      if (g == 0 && t->coeff == f->coeff && t->tower == f->tower) return t;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<SymValuation> sym_valuation(const MagClass& x, const Gauge& rho) {
  if (x.is_zero()) return SymValuation::plus_inf();
  if (x.tower)
    return x.tower_sign > 0 ? SymValuation::minus_inf() : SymValuation::plus_inf();

  auto lam = rho.lambda_class();
  if (!lam) return std::nullopt;

  if (lam->rung == 1) {  // log rho ~ -coeff * L
    if (exp_active(x)) return x.ec > 0 ? SymValuation::minus_inf() : SymValuation::plus_inf();
    return SymValuation::finite(x.p / lam->coeff);
  }
  if (lam->rung == 2) {  // log rho ~ -coeff * eps^{-b} L^{el}
    if (exp_active(x)) {
      MagClass key;
      key.ec = 1;
      key.eb = lam->b;
      key.el = lam->el;
      int k = cmp_exp_key(x, key);
      if (k > 0) return x.ec > 0 ? SymValuation::minus_inf() : SymValuation::plus_inf();
      if (k == 0) return SymValuation::finite(-x.ec / lam->coeff);
    }
    return SymValuation::finite(0.0);
  }
  // rung 0: log rho ~ -(sub-logarithmic), e.g. -log LL
  if (exp_active(x)) return x.ec > 0 ? SymValuation::minus_inf() : SymValuation::plus_inf();
  if (x.p != 0) return x.p > 0 ? SymValuation::plus_inf() : SymValuation::minus_inf();
  if (x.lp != 0) return x.lp > 0 ? SymValuation::minus_inf() : SymValuation::plus_inf();
  if (rho.family() == GaugeFamily::LogLog && rho.base()->lambda_class() &&
      rho.base()->lambda_class()->rung == 1)
    return SymValuation::finite(-x.llp);  // rho ~ LL^{-1} exactly
  if (x.llp != 0) return std::nullopt;
  return SymValuation::finite(0.0);
}

std::optional<SymValuation> sym_valuation_of(const ExprPtr& x, const Gauge& rho) {
  auto m = mag_class(*x);
  if (!m) return std::nullopt;
  return sym_valuation(*m, rho);
}

}  // namespace rcgn
