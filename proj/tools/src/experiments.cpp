#include "experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "papal/baseline.hpp"
#include "papal/diagnostics.hpp"
#include "papal/theory.hpp"
#include "papal/trace_io.hpp"

namespace papal::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() { return std::string(PAPAL_VERSION) + "+" + PAPAL_GIT_DESCRIBE; }

namespace {

json gap_json(const GapReport& g) {
  return {{"value", g.value},          {"max_over_q", g.max_over_q}, {"min_over_p", g.min_over_p},
          {"gap", g.gap},              {"nodes_per_axis", g.nodes_per_axis},
          {"lambda1", g.lambda1},      {"lambda2", g.lambda2}};
}

json lsi_json(const LsiReport& r) {
  return {{"alpha_p", r.alpha_p}, {"alpha_q", r.alpha_q}, {"sigma2_p", r.sigma2_p},
          {"sigma2_q", r.sigma2_q}, {"c_p", r.c_p},        {"c_q", r.c_q}};
}

std::vector<double> to_vec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

StochasticPayoffPtr make_noise(const ExperimentSpec& spec, PayoffPtr base) {
  if (spec.stochastic.noise == "none") return std::make_shared<DegenerateNoisePayoff>(std::move(base));
  return std::make_shared<MultiplicativeNoisePayoff>(std::move(base), spec.stochastic.amplitude);
}

json ensemble_moments(const ParticleEnsemble& e) {
  const Vector mean = e.positions.colwise().mean();
  const Matrix centered = e.positions.rowwise() - mean.transpose();
  const double var = centered.squaredNorm() / static_cast<double>(e.count() * e.dim());
  return {{"mean", to_vec(mean)}, {"variance_per_coordinate", var}};
}

}  // namespace

json schedule_report(double lambda1, double lambda2, double lipschitz_grad, int dim, double epsilon,
                     int J, long long T, double delta, double lipschitz_value, double constant) {
  const ScheduleParams sched = default_schedule(lambda2);
  const TheoreticalSchedule th =
      theoretical_schedule(lambda1, lambda2, lipschitz_grad, dim, epsilon, J, T, constant);
  const auto m = sample_size_for(epsilon, delta, lambda1, lambda2, lipschitz_value, dim, constant);
  return {
      {"inputs",
       {{"lambda1", lambda1}, {"lambda2", lambda2}, {"L1", lipschitz_grad}, {"L0", lipschitz_value},
        {"dim", dim}, {"epsilon", epsilon}, {"delta", delta}, {"J", J}, {"T", T}, {"C", constant}}},
      {"mu", sched.mu},
      {"tau", sched.tau},
      {"eta", sched.eta},
      {"iota", th.step},
      {"T_t_x", th.iterations_x},
      {"T_t_y", th.iterations_y},
      {"inner_error_target", th.inner_error_target},
      {"potential_lipschitz_x", th.lipschitz_x},
      {"potential_lipschitz_y", th.lipschitz_y},
      {"M", m},
      {"sample_radius", sample_radius(epsilon, lambda1, lambda2, dim, constant)},
      {"g_lambda2", g_lambda(lambda2)},
      {"suggested_T", suggested_outer_iterations(epsilon, lambda1, lambda2, J, constant)},
      {"lsi", lsi_json(th.lsi)},
  };
}

json run_experiment(const ExperimentSpec& spec, const ConfigMap& inputs) {
  fs::create_directories(spec.out_dir);
  const fs::path out(spec.out_dir);
  json summary;
  summary["experiment"] = spec.name;
  summary["version"] = version_string();
  summary["seed"] = spec.solver.seed;
  summary["inputs"] = inputs.values();

  if (spec.name == "schedule-report") {
    summary["report"] = schedule_report(spec.solver.lambda1, spec.solver.lambda2, spec.lipschitz_grad,
                                        spec.report_dim, spec.solver.epsilon, spec.solver.J,
                                        spec.solver.T, spec.solver.delta, spec.lipschitz_value,
                                        spec.constant);
    write_json(summary, out / "summary.json");
    return summary;
  }

  PayoffPtr game;
  try {
    game = make_builtin(spec.game_id, spec.game);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("game: ") + e.what());
  }
  summary["game"] = game->name();
  const double l1 = spec.solver.lambda1;
  const double l2 = spec.solver.lambda2;
  const bool low_dim = game->dim_x() <= 2 && game->dim_y() <= 2;

  SolverConfig cfg = spec.solver;
  cfg.gap_grid_nodes = spec.trace_gap && low_dim ? spec.grid_nodes : 0;
  cfg.grid_offset = spec.grid_offset;
  if (cfg.checkpoint_every > 0) cfg.checkpoint_dir = (out / "checkpoints").string();

  const RunResult res = spec.stochastic.enabled
                            ? run_stochastic_papal(make_noise(spec, game), cfg, spec.stochastic.batch)
                            : run_papal(game, cfg);
  save_trace_csv(res.trace, (out / "trace.csv").string());

  json papal;
  papal["chosen_t"] = res.chosen_t;
  papal["output_option"] = to_string(cfg.output);
  papal["x"] = ensemble_moments(res.x_hat);
  papal["y"] = ensemble_moments(res.y_hat);
  papal["potential_terms"] = res.g().size();
  papal["wall_ms"] = res.wall_ms;
  summary["wall_ms"] = res.wall_ms;

  if (low_dim) {
    const GameGrid grid = make_game_grid(game, l1, l2, spec.grid_nodes, spec.grid_offset);
    const GridDensity p = gibbs_density(grid.grid_x(), res.g_at(res.chosen_t));
    const GridDensity q = gibbs_density(grid.grid_y(), res.h_at(res.chosen_t));
    const GapReport gap = duality_gap(p, q, grid, l1, l2);
    papal["gap"] = gap_json(gap);
    summary["final_gap"] = gap.gap;
    if (spec.reference) {
      const FixedPointResult ref = mne_fixed_point(grid, l1, l2);
      const MetricsReport m = metrics(p, q, ref.p, ref.q);
      summary["reference"] = {{"iterations", ref.iterations},
                              {"gap", ref.gap.gap},
                              {"kl_p", m.kl_p},
                              {"kl_q", m.kl_q},
                              {"tv_p", m.tv_p},
                              {"tv_q", m.tv_q}};
    }
  } else {
    summary["final_gap"] = nullptr;
  }

  if (spec.name == "gan-gauss") {
    const auto* gan = dynamic_cast<const GanGaussPayoff*>(game.get());
    if (gan) {
      const Eigen::Index d = gan->target().size();
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
      const Vector mean = res.x_hat.positions.colwise().mean();
      papal["gaussian_kl"] = gaussian_kl(mean, eye, gan->target(), eye);
    }
  }
  if (spec.name == "landscape-demo") {
    const auto* land = dynamic_cast<const LandscapePayoff*>(game.get());
    if (land) {
      Vector vals(res.x_hat.count());
      for (Eigen::Index r = 0; r < vals.size(); ++r) vals[r] = land->landscape(row_view(res.x_hat.positions, r));
      papal["objective_mean"] = vals.mean();
      papal["objective_min"] = vals.minCoeff();
    }
  }
  summary["papal"] = papal;

  if (spec.baseline.enabled) {
    BaselineConfig bc;
    bc.lambda1 = l1;
    bc.lambda2 = l2;
    bc.T = cfg.T;
    bc.inner_iterations = spec.baseline.inner_iterations > 0 ? spec.baseline.inner_iterations
                                                            : std::max(1, cfg.sampler.iterations);
    bc.M = cfg.M;
    bc.step = spec.baseline.step;
    bc.seed = cfg.seed;
    bc.record_wall_time = cfg.record_wall_time;
    const BaselineResult base = run_weight_baseline(game, bc);
    save_trace_csv(base.trace, (out / "baseline_trace.csv").string());
    json b;
    b["wall_ms"] = base.wall_ms;
    b["x_mean"] = to_vec(base.x.mean());
    b["max_weight_x"] = base.x.weights().maxCoeff();
    if (const auto* gan = dynamic_cast<const GanGaussPayoff*>(game.get())) {
      const Eigen::Index d = gan->target().size();
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
      b["gaussian_kl"] = gaussian_kl(base.x.mean(), eye, gan->target(), eye);
    }
    if (const auto* land = dynamic_cast<const LandscapePayoff*>(game.get())) {
      const Vector w = base.x.weights();
      double objective = 0.0, best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < base.x.count(); ++r) {
        const double v = land->landscape(row_view(base.x.positions, r));
        objective += w[r] * v;
        best = std::min(best, v);
      }
      b["objective_mean"] = objective;
      b["objective_best_particle"] = best;
    }
    summary["baseline"] = b;
  }

  write_json(summary, out / "summary.json");
  return summary;
}

namespace {

void write_error(const std::string& out_dir, const std::string& kind, const std::string& message,
                 int code) {
  std::cerr << "papal: " << kind << ": " << message << '\n';
  if (out_dir.empty()) return;
  try {
    fs::create_directories(out_dir);
    write_json({{"error", kind}, {"message", message}, {"exit_code", code}, {"version", version_string()}},
               fs::path(out_dir) / "error.json");
  } catch (const std::exception&) {
  }
}

}  // namespace

int main_entry(const std::vector<std::string>& args) {
  CLI::App app{"Particle-based primal-dual solver for entropy-regularized zero-sum games", "papal"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string experiment;
  std::vector<std::string> overrides;
  long long seed = -1;
  bool print_summary = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config_path, "INI configuration file");
    sub->add_option("--seed", seed, "Master seed (overrides experiment.seed)");
    sub->add_option("--out-dir,-o", out_dir, "Output directory (overrides PAPAL_OUT_DIR)");
    sub->add_option("--override", overrides, "section.key=value, repeatable");
  };
  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  add_common(run);
  run->add_option("--experiment,-e", experiment, "Experiment name (overrides experiment.name)");
  run->add_flag("--print-summary", print_summary, "Echo summary.json to stdout");
  CLI::App* report = app.add_subcommand("schedule-report", "Print theoretical parameters as JSON");
  add_common(report);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  std::string resolved_out;
  try {
    ConfigMap config = config_path.empty() ? ConfigMap{} : ConfigMap::from_file(config_path);
    for (const auto& o : overrides) config.apply_override(o);
    if (seed >= 0) config.set("experiment.seed", std::to_string(seed));
    if (report->parsed()) config.set("experiment.name", "schedule-report");
    if (!experiment.empty()) config.set("experiment.name", experiment);
    if (const char* env = std::getenv("PAPAL_OUT_DIR"); env && *env) config.set("experiment.out_dir", env);
    if (!out_dir.empty()) config.set("experiment.out_dir", out_dir);
    resolved_out = config.get_string("experiment.out_dir", "papal-out");

    const ExperimentSpec spec = build_spec(config);
    const json summary = run_experiment(spec, config);
    if (report->parsed()) {
      std::cout << summary["report"].dump(2) << '\n';
    } else if (print_summary) {
      std::cout << summary.dump(2) << '\n';
    } else {
      std::cout << "wrote " << (fs::path(spec.out_dir) / "summary.json").string() << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    write_error(resolved_out, "config", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const NumericalError& e) {
    write_error(resolved_out, "numerical", e.what(), kExitNumerical);
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    write_error(resolved_out, "config", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const std::exception& e) {
    write_error(resolved_out, "failure", e.what(), kExitFailure);
    return kExitFailure;
  }
}

}  // namespace papal::cli
