#include "rcgn/gauge.hpp"

#include <cmath>

#include "rcgn/asymptotics.hpp"

namespace rcgn {

GaugePtr Gauge::identity() {
  return GaugePtr(new Gauge(GaugeFamily::Identity, "eps"));
}

GaugePtr Gauge::power(double a) {
  auto g = new Gauge(GaugeFamily::Power, "pow(" + std::to_string(a) + ")");
  g->param_ = a;
  return GaugePtr(g);
}

GaugePtr Gauge::expinv(double b) {
  auto g = new Gauge(GaugeFamily::ExpInv, "expinv(" + std::to_string(b) + ")");
  g->param_ = b;
  return GaugePtr(g);
}

GaugePtr Gauge::loglog(GaugePtr base) {
  auto g = new Gauge(GaugeFamily::LogLog, "loglog(" + base->name() + ")");
  g->base_ = std::move(base);
  return GaugePtr(g);
}

GaugePtr Gauge::derived_min(GaugePtr mu, ExprPtr m_net) {
  auto g = new Gauge(GaugeFamily::Derived, "min(" + mu->name() + ", 1/M)");
  g->base_ = std::move(mu);
  g->net_ = std::move(m_net);
  return GaugePtr(g);
}

GaugePtr Gauge::custom(ExprPtr e, std::string name) {
  auto g = new Gauge(GaugeFamily::Custom, std::move(name));
  g->net_ = std::move(e);
  return GaugePtr(g);
}

double Gauge::log_value(double eps) const {
  switch (family_) {
    case GaugeFamily::Identity:
      return std::log(eps);
    case GaugeFamily::Power:
      return param_ * std::log(eps);
    case GaugeFamily::ExpInv:
      return -std::pow(eps, -param_);
    case GaugeFamily::LogLog: {
      double lam = -base_->log_value(eps);
      // clamp to 1 until 1/log(lam) enters (0,1]
      if (!(lam > std::exp(1.0))) return 0.0;
      return -std::log(std::log(lam));
    }
    case GaugeFamily::Derived: {
      EvalCtx ctx{eps, std::nullopt, std::nullopt, nullptr};
      LogReal m = eval_lg(net_, ctx);
      if (m.sgn <= 0) throw EvalError("derived gauge: M_eps must be positive");
      double inv_m = -m.lg;  // log(1/M_eps)
      return std::fmin(base_->log_value(eps), inv_m);
    }
    case GaugeFamily::Custom: {
      EvalCtx ctx{eps, std::nullopt, std::nullopt, nullptr};
      LogReal v = eval_lg(net_, ctx);
      if (v.sgn <= 0) throw EvalError("gauge " + name_ + ": non-positive value");
      return v.lg;
    }
  }
  return 0.0;
}

std::optional<GaugeLambda> Gauge::lambda_class() const {
  switch (family_) {
    case GaugeFamily::Identity:
      return GaugeLambda{1, 0, 0, 1.0, true};
    case GaugeFamily::Power:
      return GaugeLambda{1, 0, 0, param_, true};
    case GaugeFamily::ExpInv:
      return GaugeLambda{2, param_, 0, 1.0, true};
    case GaugeFamily::LogLog:
      return GaugeLambda{0, 0, 0, 1.0, false};
    case GaugeFamily::Custom:
    case GaugeFamily::Derived: {
      ExprPtr probe = net_;
      if (family_ == GaugeFamily::Derived) return std::nullopt;
      auto m = mag_class(*probe);
      if (!m || m->tower) return std::nullopt;
      if (m->ec != 0) {
        if (m->ec > 0) return std::nullopt;  // not decaying
        return GaugeLambda{2, m->eb, m->el, -m->ec, true};
      }
      if (m->p > 0) return GaugeLambda{1, 0, 0, m->p, true};
      if (m->p == 0 && (m->lp < 0 || (m->lp == 0 && m->llp < 0)))
        return GaugeLambda{0, 0, 0, 1.0, false};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void Gauge::validate(const SampleGrid& grid) const {
  auto pts = grid.points();
  double first = 0, last = 0;
  for (size_t k = 0; k < pts.size(); ++k) {
    double lv = log_value(pts[k]);
    if (std::isnan(lv) || std::isinf(lv))
      throw ConfigError("gauge " + name_ + ": parameter too extreme for the grid");
    if (lv > 1e-9)
      throw ConfigError("gauge " + name_ + ": value above 1 at eps=" + std::to_string(pts[k]));
    if (k == 0) first = lv;
    if (k + 1 == pts.size()) last = lv;
  }
  if (!(last < first - 1e-6) || !(last < -0.01))
    throw ConfigError("gauge " + name_ + ": no decay to 0 along the grid");
}

GaugePtr make_gauge(const std::string& family, double param, const SampleGrid& grid,
                    GaugePtr loglog_base) {
  GaugePtr g;
  if (family == "eps") {
    g = Gauge::identity();
  } else if (family == "pow") {
    if (!(param > 0)) throw ConfigError("gauge pow: requires a > 0");
    g = Gauge::power(param);
  } else if (family == "expinv") {
    if (!(param > 0)) throw ConfigError("gauge expinv: requires b > 0");
    g = Gauge::expinv(param);
  } else if (family == "loglog") {
    g = Gauge::loglog(loglog_base ? loglog_base : Gauge::identity());
  } else {
    throw ConfigError("unknown gauge family: " + family);
  }
  g->validate(grid);
  return g;
}

namespace {

// Lambda_g(eps_k) = -log g(eps_k) over the grid
std::vector<double> lambdas(const Gauge& g, const std::vector<double>& pts) {
  std::vector<double> out(pts.size());
  for (size_t k = 0; k < pts.size(); ++k) out[k] = -g.log_value(pts[k]);
  return out;
}

// first index from which ls[k] <= Q * lr[k] holds through the end; -1 if none
int hold_from(const std::vector<double>& ls, const std::vector<double>& lr, double Q) {
  int from = -1;
  for (size_t k = 0; k < ls.size(); ++k) {
    bool ok = ls[k] <= Q * lr[k] + 1e-12 * std::fabs(Q * lr[k]);
    if (ok) {
      if (from < 0) from = static_cast<int>(k);
    } else {
      from = -1;
    }
  }
  return from;
}

bool tail_long_enough(int from, int count) {
  return from >= 0 && count - from >= std::max(4, count / 4);
}

// violating inequality at >= 3 consecutive final points (float-noise rule)
bool violates_tail(const std::vector<double>& ls, const std::vector<double>& lr, double Q,
                   bool want_ge) {
  int n = static_cast<int>(ls.size());
  if (n < 3) return false;
  for (int k = n - 3; k < n; ++k) {
    bool holds = want_ge ? ls[k] >= Q * lr[k] : ls[k] <= Q * lr[k];
    if (holds) return false;
  }
  return true;
}

// is the tail ratio Lambda_sigma / Lambda_rho strictly trending upward?
bool ratio_increasing(const std::vector<double>& ls, const std::vector<double>& lr, int window) {
  int n = static_cast<int>(ls.size());
  int w = std::min(window, n);
  if (w < 4) return false;
  double prev = -1e300;
  for (int k = n - w; k < n; ++k) {
    if (lr[k] <= 0) return false;
    double r = ls[k] / lr[k];
    if (r <= prev * 1.001) return false;
    prev = r;
  }
  return true;
}

bool ratio_decreasing(const std::vector<double>& ls, const std::vector<double>& lr, int window) {
  int n = static_cast<int>(ls.size());
  int w = std::min(window, n);
  if (w < 4) return false;
  double prev = 1e300;
  for (int k = n - w; k < n; ++k) {
    if (lr[k] <= 0) return false;
    double r = ls[k] / lr[k];
    if (r >= prev * 0.999) return false;
    prev = r;
  }
  return true;
}

// limit of Lambda_sigma / Lambda_rho from the symbolic ladder:
// 0, finite c, or +inf; nullopt when outside the ladder
std::optional<double> lambda_ratio_limit(const Gauge& sigma, const Gauge& rho) {
  auto ls = sigma.lambda_class(), lr = rho.lambda_class();
  if (!ls || !lr) return std::nullopt;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (ls->rung != lr->rung) return ls->rung < lr->rung ? 0.0 : kInf;
  if (ls->rung == 2) {
    if (ls->b != lr->b) return ls->b < lr->b ? 0.0 : kInf;
    if (ls->el != lr->el) return ls->el < lr->el ? 0.0 : kInf;
    return ls->coeff / lr->coeff;
  }
  if (ls->rung == 1) return ls->coeff / lr->coeff;
  if (!ls->exact || !lr->exact) return std::nullopt;  // two rung-0 gauges: undecided
  return 1.0;
}

}  // namespace

GaugeRelation compare_gauges(const GaugePtr& sigma, const GaugePtr& rho, const Config& cfg) {
  auto pts = cfg.grid.points();
  const int count = static_cast<int>(pts.size());
  std::vector<double> ls = lambdas(*sigma, pts), lr = lambdas(*rho, pts);
  auto c_lim = lambda_ratio_limit(*sigma, *rho);

  GaugeRelation rel;

  // ge_star: exists Q with Lambda_sigma <= Q * Lambda_rho eventually
  {
    int q_start = 1;
    if (c_lim && std::isfinite(*c_lim)) q_start = std::max(1, static_cast<int>(std::ceil(*c_lim - 1e-9)));
    Verdict v = Verdict::unknown_with("no certificate within Q_max");
    if (c_lim && std::isinf(*c_lim)) {
      v = Verdict::refuted_with(0, 0, count - 1, "Lambda ratio diverges");
    } else {
      for (int Q = q_start; Q <= cfg.Q_max; ++Q) {
        int from = hold_from(ls, lr, Q);
        if (tail_long_enough(from, count)) {
          v = Verdict::proven_with(Q, from, count - 1);
          break;
        }
      }
      if (v.unknown() && !c_lim && violates_tail(ls, lr, cfg.Q_max, false) &&
          ratio_increasing(ls, lr, cfg.slope_window))
        v = Verdict::refuted_with(cfg.Q_max, count - 3, count - 1, "ratio trend beyond Q_max");
    }
    rel.ge_star = v;
  }

  // le_star: exists Q >= 1 with Lambda_sigma >= Q * Lambda_rho eventually
  {
    Verdict v = Verdict::unknown_with("no certificate");
    bool settled = false;
    if (c_lim) {
      if (std::isinf(*c_lim) || *c_lim > 1.0) {
        // any fixed Q certifies eventually; report the smallest
      } else if (*c_lim < 1.0) {
        v = Verdict::refuted_with(1, 0, count - 1, "Lambda ratio limit below 1");
        settled = true;
      }
      // c == 1: boundary, the grid decides
    }
    if (!settled) {
      int from = -1;
      for (size_t k = 0; k < pts.size(); ++k) {
        bool ok = ls[k] >= lr[k] - 1e-12 * std::fabs(lr[k]);
        if (ok) {
          if (from < 0) from = static_cast<int>(k);
        } else {
          from = -1;
        }
      }
      if (tail_long_enough(from, count)) {
        v = Verdict::proven_with(1, from, count - 1);
      } else if (c_lim && *c_lim <= 1.0 && violates_tail(ls, lr, 1.0, true)) {
        v = Verdict::refuted_with(1, count - 3, count - 1, "Q=1 fails and ratio limit <= 1");
      } else if (!c_lim && violates_tail(ls, lr, 1.0, true) &&
                 ratio_decreasing(ls, lr, cfg.slope_window)) {
        v = Verdict::refuted_with(1, count - 3, count - 1, "ratio trend below 1");
      }
    }
    rel.le_star = v;
  }

  return rel;
}

}  // namespace rcgn
