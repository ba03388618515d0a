#ifndef RCGN_HYPERSUM_HPP
#define RCGN_HYPERSUM_HPP

#include "rcgn/sequence.hpp"

namespace rcgn {

//! One certified hyperlimit level: |Sum_{n=0}^{N} a_n - s| < rho^q was
//! checked for the stored threshold M_q and every probe N >= M_q, over the
//! recorded grid range. Certificates are self-validating: re-running the
//! inequality from the stored data must pass.
struct CertPair {
  int q = 0;
  HyperNatural M;
  std::string route;  // "closed-form bound" | "direct"
  int grid_from = 0, grid_to = -1;
};

struct HyperseriesResult {
  enum Status { Converges, DivergesPlus, DivergesMinus, NoVerdict } status = NoVerdict;
  std::optional<GeneralizedNumber> sum;
  std::vector<CertPair> certificate;
  std::vector<std::string> evidence;  // divergence / failure notes
};

const char* to_string(HyperseriesResult::Status s);

//! sigma,rho-hypersum: the class of eps -> Sum_{n=ni(N)_eps}^{ni(M)_eps}
//! a_{n eps}. Empty windows contribute 0; for finite N, M this is the
//! ordinary finite sum. Throws TypeError on unclassified sequences.
GeneralizedNumber hypersum(HyperSequence& a, const HyperNatural& N, const HyperNatural& M,
                           const Config& cfg);

//! Decide the hyperseries: certify a hyperlimit (given or proposed), or
//! certify divergence, or return NoVerdict with the collected evidence.
HyperseriesResult hyperseries_sum(HyperSequence& a, std::optional<GeneralizedNumber> candidate,
                                  const Config& cfg);

//! Re-check a stored certificate pair from its raw data.
bool recheck_cert_pair(HyperSequence& a, const GeneralizedNumber& s, const CertPair& pair,
                       const Config& cfg);

//! Sum_{0}^{N+M} - Sum_{0}^{N} = Sum_{N+1}^{N+M} as generalized numbers.
Verdict tail_identity_check(HyperSequence& a, const HyperNatural& N, const HyperNatural& M,
                            const Config& cfg);

//! For a certified-convergent series: the general term extended to
//! hypernaturals vanishes below every rho^q past the certified thresholds,
//! and prepending a hyperfinite head leaves the sum unchanged.
Verdict tail_vanishes(HyperSequence& a, const HyperseriesResult& r, const Config& cfg);

//! Cesaro hypersum: hyperlimit of N -> (N+1)^{-1} Sum_{n<=N} Sum_{k<=n} a_k.
HyperseriesResult cesaro_sum(HyperSequence& a, const Config& cfg);

//! sigma_eps = min(mu_eps, 1/M_eps); M >= 1 required on the grid. M is a
//! sigma-hypernatural by construction.
GaugePtr gauge_from_epswise(const ExprPtr& m_net, const GaugePtr& mu, const Config& cfg);

//! Epsilon-wise absolutely convergent series lift: builds the threshold net
//! M_eps from remainder bounds at the q_eps = ceil(1/eps) schedule, derives
//! sigma = min(mu, 1/M), classifies the sequence there and certifies the
//! hyperseries. Throws TypeError when the limit net is not rho-moderate or
//! no remainder bound is available.
std::pair<GaugePtr, HyperseriesResult> epswise_abs_convergence(const ExprPtr& rep,
                                                               long long start,
                                                               const GaugePtr& mu,
                                                               const GaugePtr& rho,
                                                               const Config& cfg);

}  // namespace rcgn

#endif  // RCGN_HYPERSUM_HPP
