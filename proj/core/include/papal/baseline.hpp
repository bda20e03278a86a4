#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "papal/payoff.hpp"
#include "papal/solver.hpp"

namespace papal {

// Fixed particle positions with simplex weights, stored as log-weights.
struct WeightedEnsemble {
  Matrix positions;
  Vector log_weights;

  static WeightedEnsemble uniform(Matrix positions);

  Eigen::Index count() const { return positions.rows(); }
  Vector weights() const { return log_weights.array().exp(); }
  Vector mean() const;
  // Subtracts the log-sum-exp so that the weights sum to one.
  void normalize();
};

// Opponent-averaged payoffs a_r = sum_s w_y[s] f(x_r, y_s) and
// b_s = sum_r w_x[r] f(x_r, y_s), optionally from a precomputed payoff matrix
// with entry (r, s) = f(x_r, y_s).
struct WeightedAverages {
  Vector against_y;  // a, one per x particle
  Vector against_x;  // b, one per y particle
};

WeightedAverages weighted_averages(const WeightedEnsemble& x, const WeightedEnsemble& y,
                                   const PayoffOracle& oracle, const Matrix* payoff_matrix = nullptr);

// Simultaneous entropic update from the current weights:
//   w_x[r] ~ w_x[r] exp(-step / lambda2 * a_r),  w_y[s] ~ w_y[s] exp(+step / lambda2 * b_s).
void weight_da_step(WeightedEnsemble& x, WeightedEnsemble& y, const PayoffOracle& oracle,
                    double lambda2, double step, const Matrix* payoff_matrix = nullptr);

struct BaselineConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  int T = 20;                // outer iterations (trace rows)
  int inner_iterations = 300;  // weight steps per outer iteration
  Eigen::Index M = 2000;
  double step = 0.05;
  std::uint64_t seed = 1;
  // The M x M payoff matrix is precomputed when it has at most this many entries.
  double matrix_limit = 4e7;
  bool record_wall_time = false;
};

struct BaselineResult {
  WeightedEnsemble x;
  WeightedEnsemble y;
  std::vector<IterationRecord> trace;
  double wall_ms = 0.0;
};

// Positions are drawn from the prior once and never move. Trace rows use the
// solver's schema: gap_estimate is NaN, sup_norm_h / sup_norm_g report
// max |log(M w)| on the y / x side, inner_accept_rate is 1.
BaselineResult run_weight_baseline(PayoffPtr oracle, const BaselineConfig& config);

}  // namespace papal
