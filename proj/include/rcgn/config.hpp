#ifndef RCGN_CONFIG_HPP
#define RCGN_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace rcgn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Geometric epsilon grid: eps_k = eps0 * ratio^k, k = 0..count-1.
//! Realizes "for eps small enough" checks at desk scale; the default spans
//! twelve decades down to ~9e-13.
struct SampleGrid {
  double eps0 = 0.5;
  double ratio = 0.5;
  int count = 40;

  void validate() const {
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw ConfigError("grid: eps0 must be in (0,1)");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("grid: ratio must be in (0,1)");
    if (count < 8) throw ConfigError("grid: need at least 8 points");
  }

  std::vector<double> points() const {
    std::vector<double> p(static_cast<size_t>(count));
    double e = eps0;
    for (int k = 0; k < count; ++k) {
      p[static_cast<size_t>(k)] = e;
      e *= ratio;
    }
    return p;
  }
};

struct Config {
  SampleGrid grid;
  int q_max = 20;            // negligibility exponents checked up to here
  int Q_max = 20;            // moderateness witness search bound
  double tol_quad = 1e-12;   // relative quadrature tolerance
  long long n_cap = 10000;   // uniform-in-n sweep cap
  long long sum_cap = 10000000;  // per-eps summation length cap
  int q_div = 6;             // divergence certified against rho^{-q}, q <= q_div
  int probe_R_max = 4;       // probe hypernaturals int(sigma^-R), R = 1..probe_R_max
  int slope_window = 8;      // points in the slope-fit tail
  double slope_drift = 0.05; // relative drift threshold for a stable slope
  double fp_slack = 1e-12;   // double-arithmetic equality floor (relative)
  bool parallel = true;

  void validate() const {
    grid.validate();
    if (q_max < 1 || Q_max < 1) throw ConfigError("q_max/Q_max must be positive");
    if (sum_cap < 1000) throw ConfigError("sum_cap too small");
  }
};

//! Parse "key = value" lines ('#' comments). Unknown keys are an error.
Config parse_config_file(const std::string& path);
void apply_config_kv(Config& cfg, const std::string& key, const std::string& value);

}  // namespace rcgn

#endif  // RCGN_CONFIG_HPP
