#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "papal/diagnostics.hpp"
#include "papal/ensemble.hpp"
#include "papal/payoff.hpp"
#include "papal/potential.hpp"
#include "papal/sampler.hpp"
#include "papal/schedule.hpp"

namespace papal {

enum class OutputOption {
  kLastIterate,  // Option I
  kMuWeighted,   // Option II, P[t] ~ mu_t
  kGammaWeighted,  // Option II, P[t] ~ gamma_t
};

OutputOption parse_output_option(const std::string& name);  // "I", "II-mu", "II-gamma"
std::string to_string(OutputOption option);

struct SolverConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  int T = 20;
  Eigen::Index M = 2000;
  int J = 1;
  double epsilon = 0.1;
  double delta = 0.1;
  InnerSamplerConfig sampler;
  bool warm_start = false;
  OutputOption output = OutputOption::kLastIterate;
  std::uint64_t seed = 1;
  std::optional<ScheduleParams> schedule;  // default_schedule(lambda2) when empty
  TruncationPolicy truncation;

  // Per-iteration grid gap of the Gibbs pair (games with dims <= 2); 0 disables.
  int gap_grid_nodes = 0;
  double grid_offset = 1.0;

  // Ensemble checkpoints every `checkpoint_every` iterations into checkpoint_dir.
  int checkpoint_every = 0;
  std::string checkpoint_dir;

  // wall_ms in the trace stays 0 unless set, keeping same-seed traces identical.
  bool record_wall_time = false;

  ScheduleParams resolved_schedule() const;
  void validate() const;
};

struct IterationRecord {
  int t = 0;
  double gap_estimate = 0.0;  // NaN when no grid is configured
  double sup_norm_h = 0.0;    // max over Y particles of |h - quad|y|^2|
  double sup_norm_g = 0.0;
  double inner_accept_rate = 1.0;
  double wall_ms = 0.0;
};

struct RunResult {
  ParticleEnsemble x_hat;
  ParticleEnsemble y_hat;
  int chosen_t = 0;
  std::vector<IterationRecord> trace;
  // Index t holds generation t (0 is the prior sample / prior potential).
  std::vector<EnsembleSnapshot> x_history;
  std::vector<EnsembleSnapshot> y_history;
  std::vector<FlattenedPotential> g_history;  // x-side
  std::vector<FlattenedPotential> h_history;  // y-side
  ScheduleParams schedule;
  double wall_ms = 0.0;

  const FlattenedPotential& g() const { return g_history.back(); }
  const FlattenedPotential& h() const { return h_history.back(); }
  const FlattenedPotential& g_at(int t) const { return g_history.at(static_cast<std::size_t>(t)); }
  const FlattenedPotential& h_at(int t) const { return h_history.at(static_cast<std::size_t>(t)); }
};

RunResult run_papal(PayoffPtr oracle, const SolverConfig& config);

// Payoff averages of iteration t use `batch` draws xi_{t,i}, shared by the
// phi and psi terms of that iteration.
RunResult run_stochastic_papal(StochasticPayoffPtr oracle, const SolverConfig& config,
                               std::size_t batch);

// Picks t in 1..T according to the option (always T for Option I).
int select_output_index(int T, OutputOption option, const ScheduleParams& schedule,
                        CounterStream& rng);

// Chosen snapshots (X^(t), Y^(t)).
std::pair<EnsembleSnapshot, EnsembleSnapshot> select_output(const RunResult& result,
                                                            OutputOption option,
                                                            CounterStream& rng);

}  // namespace papal
