#include "rcgn/config.hpp"

#include <fstream>
#include <sstream>

namespace rcgn {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_kv(Config& cfg, const std::string& key, const std::string& value) {
  auto as_d = [&] { return std::stod(value); };
  auto as_i = [&] { return std::stoll(value); };
  if (key == "grid.eps0") cfg.grid.eps0 = as_d();
  else if (key == "grid.ratio") cfg.grid.ratio = as_d();
  else if (key == "grid.points") cfg.grid.count = static_cast<int>(as_i());
  else if (key == "qmax") cfg.q_max = static_cast<int>(as_i());
  else if (key == "Qmax") cfg.Q_max = static_cast<int>(as_i());
  else if (key == "tol_quad") cfg.tol_quad = as_d();
  else if (key == "n_cap") cfg.n_cap = as_i();
  else if (key == "sum_cap") cfg.sum_cap = as_i();
  else if (key == "q_div") cfg.q_div = static_cast<int>(as_i());
  else if (key == "probe_R_max") cfg.probe_R_max = static_cast<int>(as_i());
  else if (key == "slope_window") cfg.slope_window = static_cast<int>(as_i());
  else if (key == "slope_drift") cfg.slope_drift = as_d();
  else if (key == "fp_slack") cfg.fp_slack = as_d();
  else if (key == "parallel") cfg.parallel = (value == "true" || value == "1" || value == "on");
  else throw ConfigError("unknown config key: " + key);
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      apply_config_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": bad value");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace rcgn
