#ifndef RCGN_GAUGE_HPP
#define RCGN_GAUGE_HPP

#include <memory>
#include <optional>
#include <string>

#include "rcgn/config.hpp"
#include "rcgn/expr.hpp"
#include "rcgn/verdict.hpp"

namespace rcgn {

enum class GaugeFamily { Identity, Power, ExpInv, LogLog, Derived, Custom };

//! Growth class of Lambda_g(eps) = -log g_eps, used to decide the *-relations
//! symbolically. Rung 0: sub-logarithmic (loglog-style gauges); rung 1:
//! Lambda ~ coeff * log(1/eps) (power gauges); rung 2: Lambda ~ coeff *
//! eps^{-b} * log(1/eps)^{el} (exponential gauges).
struct GaugeLambda {
  int rung = 1;
  double b = 0.0, el = 0.0;  // rung-2 key
  double coeff = 1.0;
  bool exact = true;
};

//! A scale net rho_eps in (0,1] tending to 0 along the grid. Monotonicity is
//! not required. All asymptotic machinery consumes log_value(), which stays
//! finite where the plain value underflows.
class Gauge {
 public:
  static GaugePtr identity();
  static GaugePtr power(double a);
  static GaugePtr expinv(double b);
  static GaugePtr loglog(GaugePtr base);
  static GaugePtr derived_min(GaugePtr mu, ExprPtr m_net);  // min(mu_eps, 1/M_eps)
  static GaugePtr custom(ExprPtr e, std::string name);

  GaugeFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  double param() const { return param_; }
  GaugePtr base() const { return base_; }
  const ExprPtr& net() const { return net_; }

  double log_value(double eps) const;
  double value(double eps) const { return std::exp(log_value(eps)); }

  std::optional<GaugeLambda> lambda_class() const;

  //! Check positivity, <= 1 and decay-to-0 on the grid; throws ConfigError.
  void validate(const SampleGrid& grid) const;

 private:
  Gauge(GaugeFamily f, std::string n) : family_(f), name_(std::move(n)) {}
  GaugeFamily family_;
  std::string name_;
  double param_ = 1.0;
  GaugePtr base_;     // LogLog / Derived
  ExprPtr net_;       // Derived (the M net) / Custom
};

//! make_gauge by family keyword: "eps" | "pow" | "expinv" | "loglog".
//! Parameter domains: a > 0, b > 0. Validates on the grid.
GaugePtr make_gauge(const std::string& family, double param, const SampleGrid& grid,
                    GaugePtr loglog_base = nullptr);

struct GaugeRelation {
  Verdict ge_star;  // exists Q: sigma_eps >= rho_eps^Q eventually
  Verdict le_star;  // exists Q >= 1: sigma_eps <= rho_eps^Q eventually
};

//! Decide sigma >= rho* and sigma <= rho*. Symbolic on the built-in families,
//! grid-checked fallback otherwise; Unknown absorbs undecidable cases.
//! Proven verdicts carry the witness Q, rechecked on the sample grid.
GaugeRelation compare_gauges(const GaugePtr& sigma, const GaugePtr& rho, const Config& cfg);

}  // namespace rcgn

#endif  // RCGN_GAUGE_HPP
