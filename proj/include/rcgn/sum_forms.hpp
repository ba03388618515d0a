#ifndef RCGN_SUM_FORMS_HPP
#define RCGN_SUM_FORMS_HPP

#include <functional>
#include <optional>

#include "rcgn/gauge.hpp"
#include "rcgn/number.hpp"

namespace rcgn {

//! Recognized shapes of sequence representatives. Recognition is structural
//! and exact; everything else is Generic and handled numerically.
struct SeqForm {
  enum Kind {
    Zero,
    ConstInN,       // a_n = coeff(eps)
    Geometric,      // a_n = coeff * base^n            (base n-free, may be negative)
    Exponential,    // a_n = coeff * base^n / n!
    AlternatingUnit,// a_n = (-1)^n
    PolyLinear,     // a_n = alpha + beta * n
    PowerLaw,       // a_n = coeff / (n + shift)^p     (constant p)
    AltFactor,      // a_n = (-1)^n * inner(n)
    ConvGeomGeom,   // convolution of coeff*base^n with coeff2*base2^n, base==base2
    ConvExpExp,     // convolution of two exponentials: equals (base+base2)^n/n! * coeff*coeff2
    Generic
  } kind = Generic;

  ExprPtr coeff, coeff2;
  ExprPtr base, base2;
  ExprPtr alpha, beta;
  ExprPtr inner;
  double shift = 0;
  double p = 0;
};

SeqForm recognize_form(const ExprPtr& rep);

//! Exact per-eps formula for Sum_{n=from}^{to} a_n when the form admits one
//! (empty windows evaluate to 0). Stays evaluable in log space at depths
//! where direct summation is capped.
std::optional<ExprPtr> closed_partial_sum(const ExprPtr& rep, const ExprPtr& from,
                                          const ExprPtr& to);

//! Certified tail machinery for convergent recognized forms:
//!   | Sum_{n=start}^{N} a_n - limit | <= exp(bound_lg(eps, N))
//! for N >= threshold(eps), with the bound decreasing in N.
struct TailBound {
  ExprPtr limit;                                    // series limit net
  std::function<LogReal(double, double)> bound_lg;  // (eps, N) -> log bound
  std::function<double(double)> threshold;          // eps -> minimal valid N
  std::function<ExprPtr(int)> witness;              // q -> stored M_q net
  // analytic threshold solver: smallest N (as a LogReal, it may exceed the
  // double range) with bound < exp(target_lg); null when only the generic
  // doubling inversion applies
  std::function<LogReal(double, double)> witness_lg;
};

std::optional<TailBound> tail_bound(const ExprPtr& rep, long long start, const GaugePtr& rho,
                                    const Config& cfg);

//! Smallest integer N >= lo with bound_lg(eps, N) < target_lg, by doubling
//! plus bisection (the bound must be non-increasing in N). Returns +inf when
//! not reached below 2^500.
double invert_bound(const std::function<LogReal(double, double)>& bound_lg, double eps_v,
                    double lo, double target_lg);

}  // namespace rcgn

#endif  // RCGN_SUM_FORMS_HPP
