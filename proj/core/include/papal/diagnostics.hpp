#pragma once

#include <optional>

#include "papal/grid.hpp"
#include "papal/payoff.hpp"
#include "papal/potential.hpp"

namespace papal {

// Payoff restricted to a pair of grids. The node-by-node payoff matrix is
// cached when it has at most `cache_limit` entries.
class GameGrid {
 public:
  GameGrid(PayoffPtr oracle, GridPtr grid_x, GridPtr grid_y, double cache_limit = 2e7);

  const PayoffOracle& oracle() const { return *oracle_; }
  const GridPtr& grid_x() const { return grid_x_; }
  const GridPtr& grid_y() const { return grid_y_; }
  const GridPtr& grid(Player p) const { return p == Player::kMin ? grid_x_ : grid_y_; }

  // E_q f(x, .) at every x node.
  Vector mean_over_y(const GridDensity& q) const;
  // E_p f(., y) at every y node.
  Vector mean_over_x(const GridDensity& p) const;
  // E_p E_q f.
  double mean_payoff(const GridDensity& p, const GridDensity& q) const;

 private:
  PayoffPtr oracle_;
  GridPtr grid_x_;
  GridPtr grid_y_;
  std::optional<Matrix> cache_;
};

// Same grid for both players: [-R, R]^d with R = default_grid_radius.
GameGrid make_game_grid(PayoffPtr oracle, double lambda1, double lambda2, int nodes_per_axis,
                        double offset = 1.0);

// L(p, q) = E_p E_q f + lambda1 E_p|x|^2 + lambda2 E_p log p - lambda1 E_q|y|^2 - lambda2 E_q log q.
double functional_L(const GridDensity& p, const GridDensity& q, const GameGrid& game,
                    double lambda1, double lambda2);

// Gibbs best response of `responder` to the opponent density.
//   min: exp{-(1/lambda2) [E_q f + lambda1 |x|^2]}
//   max: exp{-(1/lambda2) [-E_p f + lambda1 |y|^2]}
GridDensity best_response(const GridDensity& opponent_density, const GameGrid& game,
                          double lambda1, double lambda2, Player responder);

struct GapReport {
  double value = 0.0;           // L(p, q)
  double max_over_q = 0.0;      // L(p, BR(p))
  double min_over_p = 0.0;      // L(BR(q), q)
  double gap = 0.0;
  int nodes_per_axis = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

GapReport duality_gap(const GridDensity& p, const GridDensity& q, const GameGrid& game,
                      double lambda1, double lambda2);

struct FixedPointConfig {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iters = 10000;
};

struct FixedPointResult {
  GridDensity p;
  GridDensity q;
  int iterations = 0;
  double last_delta = 0.0;  // total-variation change of the last sweep
  GapReport gap;
};

// Damped alternating best responses from the prior pair until the
// total-variation change of both densities drops below tol.
FixedPointResult mne_fixed_point(const GameGrid& game, double lambda1, double lambda2,
                                 const FixedPointConfig& cfg = {});

// Prior density exp(-(lambda1 / lambda2) |z|^2) on a grid.
GridDensity prior_density(GridPtr grid, double lambda1, double lambda2);

// exp(-V) normalized on the grid.
GridDensity gibbs_density(GridPtr grid, const FlattenedPotential& potential);

struct MetricsReport {
  double kl_p = 0.0;
  double kl_q = 0.0;
  double tv_p = 0.0;
  double tv_q = 0.0;
};

MetricsReport metrics(const GridDensity& p, const GridDensity& q, const GridDensity& p_ref,
                      const GridDensity& q_ref);

// KL(N(m1, S1) || N(m2, S2)).
double gaussian_kl(const Vector& m1, const Eigen::MatrixXd& s1, const Vector& m2,
                   const Eigen::MatrixXd& s2);

}  // namespace papal
