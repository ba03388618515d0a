#ifndef RCGN_SEQUENCE_HPP
#define RCGN_SEQUENCE_HPP

#include <string>
#include <vector>

#include "rcgn/hypernat.hpp"
#include "rcgn/number.hpp"
#include "rcgn/sum_forms.hpp"

namespace rcgn {

//! Doubly-indexed net (n, eps) -> real with its gauge pair. `start` is the
//! first defined index; hypersum windows clamp below it. Classification
//! verdicts are cached on the value; changing gauges means a new object.
struct HyperSequence {
  ExprPtr rep;
  GaugePtr sigma, rho;
  long long start = 0;
  std::optional<Verdict> mod_hyp;   // moderate over hypersums
  std::optional<Verdict> unif_mod;  // uniformly moderate (with witness Q)
};

HyperSequence make_sequence(ExprPtr rep, GaugePtr sigma, GaugePtr rho, long long start = 0);

//! abs / scale / shift derive new (unclassified) sequences
HyperSequence seq_abs(const HyperSequence& a);
HyperSequence seq_scale(const HyperSequence& a, const ExprPtr& factor);
HyperSequence seq_shift(const HyperSequence& a, long long k);

struct Probe {
  std::string label;
  HyperNatural N;
};

//! Structured probe family realizing quantifiers over sigma-hypernaturals:
//! constants {0,1,2,5}, int(sigma^-R) for R = 1..probe_R_max, and the mixed
//! net int(sigma^-1 log(1/sigma)).
std::vector<Probe> probe_family(const GaugePtr& sigma, const Config& cfg);

//! Window sum net: Sum_{n=max(from,start)}^{to} a_n as an expression —
//! exact closed form when the representative is recognized, a capped
//! summation node otherwise.
ExprPtr window_sum_net(const HyperSequence& a, ExprPtr from, ExprPtr to);

//! Per-eps growth of |a_{n,eps}| as n -> inf.
struct GrowthClass {
  enum Kind { Decays, Bounded, Grows, Unknown } kind = Unknown;
  std::string why;
};
GrowthClass growth_in_n(const ExprPtr& rep, long long start, const Config& cfg);

//! Membership in the space of sequences for hyperseries: every probed
//! hypersum is rho-moderate. Result cached on the sequence.
Verdict is_moderate_over_hypersums(HyperSequence& a, const Config& cfg);

//! The ~_{sigma rho} relation: windowed sums of the difference are
//! rho-negligible at every probe pair.
Verdict are_equivalent(const HyperSequence& a, const HyperSequence& b, const Config& cfg);

//! Uniform moderateness: sup_n |a_{n,eps}| <= rho^{-Q}, decided by form
//! analysis where possible and an n-sweep otherwise.
Verdict is_uniformly_moderate(HyperSequence& a, const Config& cfg);

//! The natural map from uniformly moderate sequences into the hyperseries
//! space, valid under sigma >= rho*; derives the hypersum witness
//! R * Q_{sigma,rho} + Q instead of re-probing.
HyperSequence lambda_embed(const HyperSequence& a, const GaugeRelation& rel, const Config& cfg);

//! a_N = [a_{ni(N)_eps, eps}]: extension of the sequence to hypernaturals.
GeneralizedNumber extend_to_hypernat(const HyperSequence& a, const HyperNatural& N,
                                     const Config& cfg);

//! Patched representative for a sharply bounded sequence: listed values
//! below their certified thresholds, the bound's representative above.
HyperSequence from_bounded_sequence(const std::vector<GeneralizedNumber>& values,
                                    const GeneralizedNumber& bound, GaugePtr sigma,
                                    const Config& cfg);

}  // namespace rcgn

#endif  // RCGN_SEQUENCE_HPP
