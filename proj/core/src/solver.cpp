#include "papal/solver.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "papal/grid.hpp"

namespace papal {

OutputOption parse_output_option(const std::string& name) {
  if (name == "I" || name == "last") return OutputOption::kLastIterate;
  if (name == "II-mu") return OutputOption::kMuWeighted;
  if (name == "II-gamma") return OutputOption::kGammaWeighted;
  throw InvalidArgument("unknown output option '" + name + "' (expected I, II-mu or II-gamma)");
}

std::string to_string(OutputOption option) {
  switch (option) {
    case OutputOption::kLastIterate: return "I";
    case OutputOption::kMuWeighted: return "II-mu";
    case OutputOption::kGammaWeighted: return "II-gamma";
  }
  return "?";
}

ScheduleParams SolverConfig::resolved_schedule() const {
  return schedule ? *schedule : default_schedule(lambda2);
}

void SolverConfig::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("lambda1 and lambda2 must be positive");
  if (T < 1) throw InvalidArgument("T must be >= 1");
  if (M < 1) throw InvalidArgument("M must be >= 1");
  if (J < 1) throw InvalidArgument("J must be >= 1");
  sampler.validate();
  const auto violations = validate_schedule(resolved_schedule(), lambda2, T);
  if (!violations.empty()) throw InvalidArgument("invalid schedule: " + describe(violations.front()));
  if (checkpoint_every < 0) throw InvalidArgument("checkpoint_every must be >= 0");
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

double non_quadratic_sup(const FlattenedPotential& pot, const Matrix& points) {
  Vector values;
  pot.evaluator().evaluate(points, &values, nullptr);
  const Vector quad = pot.quad_coeff() * points.rowwise().squaredNorm();
  return (values - quad).cwiseAbs().maxCoeff();
}

void checkpoint(const SolverConfig& cfg, int t, const ParticleEnsemble& x, const ParticleEnsemble& y) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.checkpoint_dir);
  const std::string stem = cfg.checkpoint_dir + "/t" + std::to_string(t);
  save_ensemble(x, stem + "_x.csv");
  save_ensemble(y, stem + "_y.csv");
}

RunResult run_impl(PayoffPtr oracle, StochasticPayoffPtr noisy, std::size_t batch,
                   const SolverConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  const int m = oracle->dim_x();
  const int n = oracle->dim_y();
  const double l1 = cfg.lambda1;
  const double l2 = cfg.lambda2;

  RunResult res;
  res.schedule = cfg.resolved_schedule();

  std::optional<GameGrid> game;
  if (cfg.gap_grid_nodes > 0 && m <= 2 && n <= 2) {
    game.emplace(make_game_grid(oracle, l1, l2, cfg.gap_grid_nodes, cfg.grid_offset));
  }

  ParticleEnsemble x0 = sample_prior(m, cfg.M, l1, l2, {cfg.seed, 0, StreamTag::kPriorX});
  ParticleEnsemble y0 = sample_prior(n, cfg.M, l1, l2, {cfg.seed, 0, StreamTag::kPriorY});
  res.x_history.push_back(freeze(std::move(x0)));
  res.y_history.push_back(freeze(std::move(y0)));
  res.h_history.push_back(FlattenedPotential::prior(Player::kMax, n, l1, l2));
  res.g_history.push_back(FlattenedPotential::prior(Player::kMin, m, l1, l2));

  for (int t = 0; t < cfg.T; ++t) {
    const auto step_start = Clock::now();
    const int next = t + 1;
    const auto gen = static_cast<std::uint64_t>(next);

    PayoffPtr term_oracle = oracle;
    std::vector<double> draws;
    if (noisy) {
      draws.resize(batch);
      CounterStream stream = StreamKey{cfg.seed, gen, StreamTag::kPayoffNoise}.stream(0);
      for (auto& xi : draws) xi = noisy->sample_noise(stream);
      term_oracle = noisy->average_over(draws);
    }

    // y-side: phi_{t+1} from X^(t), X^(t-1).
    const EnsembleSnapshot& x_t = res.x_history[static_cast<std::size_t>(t)];
    const EnsembleSnapshot& x_prev = res.x_history[static_cast<std::size_t>(t > 0 ? t - 1 : 0)];
    PotentialTerm phi = make_phi_term(x_t, x_prev, res.schedule.mu_at(next), term_oracle);
    if (noisy) phi.attach_noise(noisy, draws);
    res.h_history.push_back(res.h_history.back().extended(std::move(phi), res.schedule.tau_at(next)));
    const FlattenedPotential& h = res.h_history.back();

    ParticleEnsemble y_init =
        cfg.warm_start ? *res.y_history.back()
                       : sample_prior(n, cfg.M, l1, l2, {cfg.seed, gen, StreamTag::kPriorY});
    ChainResult y_chain = run_inner_sampler(h, std::move(y_init), cfg.sampler,
                                            {cfg.seed, gen, StreamTag::kChainY},
                                            {cfg.seed, gen, StreamTag::kSubsampleY}, cfg.truncation);
    y_chain.ensemble.generation = gen;
    res.y_history.push_back(freeze(std::move(y_chain.ensemble)));

    // x-side: psi_{t+1} from Y^(t+1).
    PotentialTerm psi = make_psi_term(res.y_history.back(), term_oracle);
    if (noisy) psi.attach_noise(noisy, draws);
    res.g_history.push_back(res.g_history.back().extended(std::move(psi), res.schedule.eta_at(next)));
    const FlattenedPotential& g = res.g_history.back();

    ParticleEnsemble x_init =
        cfg.warm_start ? *res.x_history.back()
                       : sample_prior(m, cfg.M, l1, l2, {cfg.seed, gen, StreamTag::kPriorX});
    ChainResult x_chain = run_inner_sampler(g, std::move(x_init), cfg.sampler,
                                            {cfg.seed, gen, StreamTag::kChainX},
                                            {cfg.seed, gen, StreamTag::kSubsampleX}, cfg.truncation);
    x_chain.ensemble.generation = gen;
    res.x_history.push_back(freeze(std::move(x_chain.ensemble)));

    IterationRecord rec;
    rec.t = next;
    rec.sup_norm_h = non_quadratic_sup(h, res.y_history.back()->positions);
    rec.sup_norm_g = non_quadratic_sup(g, res.x_history.back()->positions);
    ChainStats stats;
    stats.proposals = y_chain.stats.proposals + x_chain.stats.proposals;
    stats.accepted = y_chain.stats.accepted + x_chain.stats.accepted;
    rec.inner_accept_rate = stats.accept_rate();
    if (game) {
      const GridDensity p = gibbs_density(game->grid_x(), g);
      const GridDensity q = gibbs_density(game->grid_y(), h);
      rec.gap_estimate = duality_gap(p, q, *game, l1, l2).gap;
    } else {
      rec.gap_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    rec.wall_ms = cfg.record_wall_time ? elapsed_ms(step_start) : 0.0;
    res.trace.push_back(rec);

    if (cfg.checkpoint_every > 0 && !cfg.checkpoint_dir.empty() && next % cfg.checkpoint_every == 0) {
      checkpoint(cfg, next, *res.x_history.back(), *res.y_history.back());
    }
  }

  CounterStream out_rng = StreamKey{cfg.seed, 0, StreamTag::kOutput}.stream(0);
  res.chosen_t = select_output_index(cfg.T, cfg.output, res.schedule, out_rng);
  res.x_hat = *res.x_history[static_cast<std::size_t>(res.chosen_t)];
  res.y_hat = *res.y_history[static_cast<std::size_t>(res.chosen_t)];
  res.wall_ms = elapsed_ms(start);
  return res;
}

}  // namespace

RunResult run_papal(PayoffPtr oracle, const SolverConfig& config) {
  if (!oracle) throw InvalidArgument("null payoff");
  return run_impl(std::move(oracle), nullptr, 0, config);
}

RunResult run_stochastic_papal(StochasticPayoffPtr oracle, const SolverConfig& config,
                               std::size_t batch) {
  if (!oracle) throw InvalidArgument("null payoff");
  if (batch < 1) throw InvalidArgument("noise batch must be >= 1");
  PayoffPtr mean = oracle->mean();
  return run_impl(std::move(mean), std::move(oracle), batch, config);
}

int select_output_index(int T, OutputOption option, const ScheduleParams& schedule,
                        CounterStream& rng) {
  if (T < 1) throw InvalidArgument("cannot select an output from an empty trace");
  if (option == OutputOption::kLastIterate) return T;
  std::vector<double> w(static_cast<std::size_t>(T));
  if (option == OutputOption::kMuWeighted) {
    for (int t = 1; t <= T; ++t) w[static_cast<std::size_t>(t - 1)] = schedule.mu_at(t);
  } else {
    double top = -std::numeric_limits<double>::infinity();
    for (int t = 1; t <= T; ++t) top = std::max(top, schedule.log_gamma_at(t));
    for (int t = 1; t <= T; ++t) {
      w[static_cast<std::size_t>(t - 1)] = std::exp(schedule.log_gamma_at(t) - top);
    }
  }
  std::discrete_distribution<int> pick(w.begin(), w.end());
  return pick(rng) + 1;
}

std::pair<EnsembleSnapshot, EnsembleSnapshot> select_output(const RunResult& result,
                                                            OutputOption option,
                                                            CounterStream& rng) {
  const int T = static_cast<int>(result.trace.size());
  const int t = select_output_index(T, option, result.schedule, rng);
  return {result.x_history.at(static_cast<std::size_t>(t)),
          result.y_history.at(static_cast<std::size_t>(t))};
}

}  // namespace papal
