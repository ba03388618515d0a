#ifndef RCGN_NUMBER_HPP
#define RCGN_NUMBER_HPP

#include <optional>
#include <vector>

#include "rcgn/asymptotics.hpp"
#include "rcgn/config.hpp"
#include "rcgn/expr.hpp"
#include "rcgn/gauge.hpp"
#include "rcgn/verdict.hpp"

namespace rcgn {

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! true when both gauges denote the same scale net
bool gauge_equiv(const GaugePtr& a, const GaugePtr& b);

// ---- sampled nets ----------------------------------------------------------

//! A net evaluated over the grid. Points may be infeasible (summation cap);
//! feasibility is tracked as a contiguous prefix [0, k_last].
struct SampledNet {
  std::vector<LogReal> v;  // valid on [0, k_last]
  int k_last = -1;
  bool feasible() const { return k_last >= 0; }
};

SampledNet sample_net(const ExprPtr& e, const Config& cfg,
                      std::optional<long long> n = std::nullopt,
                      std::optional<double> x = std::nullopt);

//! log rho_eps at each grid point
std::vector<double> gauge_logs(const Gauge& rho, const Config& cfg);

// grid-tier decisions on sampled nets; slack_lg (when given) is a per-point
// log-magnitude floor treated as numerically zero
Verdict moderate_of_samples(const SampledNet& s, const std::vector<double>& rho_lg,
                            const Config& cfg);
Verdict negligible_of_samples(const SampledNet& s, const std::vector<double>& rho_lg,
                              const Config& cfg, const std::vector<double>* slack_lg = nullptr);

// ---- valuation --------------------------------------------------------------

struct ValuationResult {
  enum Kind { Exact, Estimate, PlusInf, MinusInf, Unknown } kind = Unknown;
  double v = 0;
  bool stable = false;  // slope-fit stability (Estimate only)
};

//! v = lim log|x_eps| / log rho_eps. Exact on the symbolic subset, otherwise
//! a least-squares slope over the grid tail with a stability flag.
ValuationResult valuation(const ExprPtr& x, const GaugePtr& rho, const Config& cfg);

//! membership in the rho-moderate nets, with witness Q: |x| <= rho^{-Q}
Verdict is_moderate(const ExprPtr& x, const GaugePtr& rho, const Config& cfg);

//! rho-negligibility: |x| <= rho^q for all q (up to q_max on the grid tier)
Verdict is_negligible(const ExprPtr& x, const GaugePtr& rho, const Config& cfg);

// ---- generalized numbers ------------------------------------------------------

//! Element of the Robinson-Colombeau ring: a representative net plus its
//! gauge. Two values are equal iff their difference is rho-negligible.
struct GeneralizedNumber {
  ExprPtr rep;
  GaugePtr gauge;
};

GeneralizedNumber gn(ExprPtr rep, GaugePtr gauge);
GeneralizedNumber gn_const(double v, GaugePtr gauge);

GeneralizedNumber gn_add(const GeneralizedNumber& x, const GeneralizedNumber& y);
GeneralizedNumber gn_sub(const GeneralizedNumber& x, const GeneralizedNumber& y);
GeneralizedNumber gn_mul(const GeneralizedNumber& x, const GeneralizedNumber& y);
GeneralizedNumber gn_neg(const GeneralizedNumber& x);
GeneralizedNumber gn_abs(const GeneralizedNumber& x);

struct OrderVerdict {
  enum Rel { EQ, LT, LE, GT, GE, SubpointOnly, Unknown } rel = Unknown;
  std::optional<int> q;          // strict witness: |y - x| >= rho^q on the tail
  int grid_from = 0, grid_to = -1;
  std::vector<int> pos_idx, neg_idx;  // SubpointOnly: grid indices per direction
  std::string note;

  bool is(Rel r) const { return rel == r; }
  bool le_like() const { return rel == EQ || rel == LT || rel == LE; }
  bool ge_like() const { return rel == EQ || rel == GT || rel == GE; }
};

const char* to_string(OrderVerdict::Rel r);

//! Decide the sharp order between x and y (same gauge required).
OrderVerdict gn_compare(const GeneralizedNumber& x, const GeneralizedNumber& y,
                        const Config& cfg);

}  // namespace rcgn

#endif  // RCGN_NUMBER_HPP
