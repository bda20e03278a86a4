#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "papal/baseline.hpp"
#include "papal/games.hpp"
#include "papal/solver.hpp"

namespace papal::cli {

// Flat "section.key" -> value view of an INI file plus command-line overrides.
class ConfigMap {
 public:
  static ConfigMap from_file(const std::string& path);
  static ConfigMap from_string(const std::string& text);

  // "section.key=value"
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  double require_double(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  // Throws ConfigError naming the first key outside the documented schema.
  void check_known_keys() const;

 private:
  std::map<std::string, std::string> values_;
};

struct StochasticSettings {
  bool enabled = false;
  std::string noise = "multiplicative";  // multiplicative | none
  double amplitude = 1.0;
  std::size_t batch = 100;
};

struct BaselineSettings {
  bool enabled = false;
  double step = 0.05;
  int inner_iterations = 0;  // 0: same as sampler.iterations
};

struct ExperimentSpec {
  std::string name;
  std::string game_id;
  GameParams game;
  SolverConfig solver;
  int grid_nodes = 1024;
  double grid_offset = 1.0;
  bool trace_gap = true;
  StochasticSettings stochastic;
  BaselineSettings baseline;
  std::string out_dir = "papal-out";
  bool reference = false;  // compare against the fixed-point oracle (dims <= 2)

  // schedule-report inputs
  double lipschitz_value = 1.0;
  double lipschitz_grad = 1.0;
  int report_dim = 1;
  double constant = 1.0;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"sine-symmetric", "sine-shifted", "gan-gauss",
                                                 "landscape-demo", "schedule-report"};
  return names;
}

// Validated experiment description; solver.lambda1 and solver.lambda2 are required.
ExperimentSpec build_spec(const ConfigMap& config);

}  // namespace papal::cli
