#include "config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace papal::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "experiment.name", "experiment.seed", "experiment.out_dir", "experiment.reference",
      "game.id", "game.dim", "game.dim_y", "game.amplitude", "game.shift", "game.target_scale",
      "game.target_seed", "game.radius", "game.value", "game.center",
      "solver.lambda1", "solver.lambda2", "solver.T", "solver.M", "solver.J", "solver.epsilon",
      "solver.delta", "solver.output", "solver.warm_start", "solver.checkpoint_every",
      "solver.truncation", "solver.truncation_floor", "solver.record_wall_time",
      "sampler.kind", "sampler.step", "sampler.iterations", "sampler.inner_iterations",
      "sampler.inner_step", "sampler.particle_batch", "sampler.noise_batch",
      "grid.nodes", "grid.offset", "grid.trace_gap",
      "stochastic.enabled", "stochastic.noise", "stochastic.amplitude", "stochastic.batch",
      "baseline.enabled", "baseline.step", "baseline.inner_iterations",
      "report.L0", "report.L1", "report.dim", "report.C",
  };
  return keys;
}

ConfigMap flatten(const boost::property_tree::ptree& tree) {
  ConfigMap out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("config key '" + section + "' must live inside a [section]");
    }
    for (const auto& [key, value] : body) out.set(section + "." + key, value.data());
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  return flatten(tree);
}

ConfigMap ConfigMap::from_string(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  return flatten(tree);
}

void ConfigMap::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.find('.') == std::string::npos) {
    throw ConfigError("override key '" + key + "' must be section.key");
  }
  values_[key] = trim(assignment.substr(eq + 1));
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' expects a number, got '" + it->second + "'");
  }
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' expects an integer, got '" + it->second + "'");
  }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "' expects a boolean, got '" + it->second + "'");
}

double ConfigMap::require_double(const std::string& key) const {
  if (!has(key)) {
    const std::string name = key.substr(key.find('.') + 1);
    throw ConfigError("missing required config key '" + name + "' (" + key + ")");
  }
  return get_double(key, 0.0);
}

void ConfigMap::check_known_keys() const {
  for (const auto& [key, value] : values_) {
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
}

namespace {

std::string default_game_for(const std::string& experiment) {
  if (experiment == "landscape-demo") return "landscape-min";
  if (experiment == "schedule-report") return "sine-symmetric";
  return experiment;
}

}  // namespace

ExperimentSpec build_spec(const ConfigMap& c) {
  c.check_known_keys();
  ExperimentSpec s;
  s.name = c.get_string("experiment.name", "sine-symmetric");
  if (std::find(experiment_names().begin(), experiment_names().end(), s.name) ==
      experiment_names().end()) {
    throw ConfigError("unknown experiment '" + s.name + "'");
  }
  s.out_dir = c.get_string("experiment.out_dir", s.out_dir);
  s.reference = c.get_bool("experiment.reference", s.name == "sine-shifted");

  s.game_id = c.get_string("game.id", default_game_for(s.name));
  s.game.dim = static_cast<int>(c.get_int("game.dim", s.game.dim));
  s.game.dim_y = static_cast<int>(c.get_int("game.dim_y", s.game.dim_y));
  s.game.amplitude = c.get_double("game.amplitude", s.game.amplitude);
  s.game.shift = c.get_double("game.shift", s.game.shift);
  s.game.target_scale = c.get_double("game.target_scale", s.game.target_scale);
  s.game.target_seed = static_cast<std::uint64_t>(c.get_int("game.target_seed", 7));
  s.game.radius = c.get_double("game.radius", s.game.radius);
  s.game.value = c.get_double("game.value", s.game.value);
  s.game.center = c.get_double("game.center", s.game.center);

  SolverConfig& sc = s.solver;
  sc.lambda1 = c.require_double("solver.lambda1");
  sc.lambda2 = c.require_double("solver.lambda2");
  sc.T = static_cast<int>(c.get_int("solver.T", sc.T));
  sc.M = c.get_int("solver.M", sc.M);
  sc.J = static_cast<int>(c.get_int("solver.J", sc.J));
  sc.epsilon = c.get_double("solver.epsilon", sc.epsilon);
  sc.delta = c.get_double("solver.delta", sc.delta);
  try {
    sc.output = parse_output_option(c.get_string("solver.output", "I"));
    sc.sampler.kind = parse_sampler_kind(c.get_string("sampler.kind", "ula"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  sc.warm_start = c.get_bool("solver.warm_start", false);
  sc.checkpoint_every = static_cast<int>(c.get_int("solver.checkpoint_every", 0));
  if (c.get_bool("solver.truncation", false)) {
    sc.truncation = TruncationPolicy::default_for(sc.lambda2);
    sc.truncation.weight_floor = c.get_double("solver.truncation_floor", sc.truncation.weight_floor);
  }
  sc.record_wall_time = c.get_bool("solver.record_wall_time", false);
  sc.seed = static_cast<std::uint64_t>(c.get_int("experiment.seed", 1));

  sc.sampler.step = c.get_double("sampler.step", sc.sampler.step);
  sc.sampler.iterations = static_cast<int>(c.get_int("sampler.iterations", sc.sampler.iterations));
  sc.sampler.inner_iterations =
      static_cast<int>(c.get_int("sampler.inner_iterations", sc.sampler.inner_iterations));
  sc.sampler.inner_step = c.get_double("sampler.inner_step", sc.sampler.inner_step);
  sc.sampler.particle_batch = c.get_int("sampler.particle_batch", sc.sampler.particle_batch);
  sc.sampler.noise_batch =
      static_cast<std::size_t>(c.get_int("sampler.noise_batch", static_cast<long long>(sc.sampler.noise_batch)));

  s.grid_nodes = static_cast<int>(c.get_int("grid.nodes", s.grid_nodes));
  s.grid_offset = c.get_double("grid.offset", s.grid_offset);
  s.trace_gap = c.get_bool("grid.trace_gap", s.trace_gap);

  s.stochastic.enabled = c.get_bool("stochastic.enabled", false);
  s.stochastic.noise = c.get_string("stochastic.noise", s.stochastic.noise);
  if (s.stochastic.noise != "multiplicative" && s.stochastic.noise != "none") {
    throw ConfigError("stochastic.noise must be 'multiplicative' or 'none'");
  }
  s.stochastic.amplitude = c.get_double("stochastic.amplitude", s.stochastic.amplitude);
  s.stochastic.batch = static_cast<std::size_t>(c.get_int("stochastic.batch", 100));

  s.baseline.enabled = c.get_bool("baseline.enabled", s.name == "gan-gauss" || s.name == "landscape-demo");
  s.baseline.step = c.get_double("baseline.step", s.baseline.step);
  s.baseline.inner_iterations = static_cast<int>(c.get_int("baseline.inner_iterations", 0));

  s.lipschitz_value = c.get_double("report.L0", 1.0);
  s.lipschitz_grad = c.get_double("report.L1", 1.0);
  s.report_dim = static_cast<int>(c.get_int("report.dim", 1));
  s.constant = c.get_double("report.C", 1.0);
  return s;
}

}  // namespace papal::cli
