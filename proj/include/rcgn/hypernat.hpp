#ifndef RCGN_HYPERNAT_HPP
#define RCGN_HYPERNAT_HPP

#include "rcgn/number.hpp"

namespace rcgn {

//! sigma-moderate net of nonnegative integers: the index object of
//! hypersums. Representatives are integer-valued by construction.
struct HyperNatural {
  ExprPtr rep;
  GaugePtr sigma;
  long long R = 0;  // certified witness: rep(eps) <= sigma_eps^{-R} on the tail
};

//! Validates integer values on the grid and certifies sigma-moderateness;
//! throws TypeError otherwise.
HyperNatural hypernat_from_net(ExprPtr x, GaugePtr sigma, const Config& cfg);

HyperNatural hypernat_const(long long k, GaugePtr sigma);

//! ni(N)_eps: the representative's integer value at eps. Exact as long as it
//! fits a double's integer range; huge values saturate (summation call sites
//! enforce the cap separately).
double ni(const HyperNatural& N, double eps_v);

//! value as a LogReal, for certificate arithmetic at depths where ni
//! overflows every native integer type
LogReal ni_lg(const HyperNatural& N, double eps_v);

HyperNatural hypernat_add(const HyperNatural& a, const HyperNatural& b);
HyperNatural hypernat_add_const(const HyperNatural& a, long long k);

}  // namespace rcgn

#endif  // RCGN_HYPERNAT_HPP
