#include "papal/diagnostics.hpp"

#include <cmath>

namespace papal {

GameGrid::GameGrid(PayoffPtr oracle, GridPtr grid_x, GridPtr grid_y, double cache_limit)
    : oracle_(std::move(oracle)), grid_x_(std::move(grid_x)), grid_y_(std::move(grid_y)) {
  if (grid_x_->dim() != oracle_->dim_x() || grid_y_->dim() != oracle_->dim_y()) {
    throw DimensionMismatch("grid dimensions do not match the payoff");
  }
  const double entries = static_cast<double>(grid_x_->size()) * static_cast<double>(grid_y_->size());
  if (entries <= cache_limit) {
    Matrix f(grid_x_->size(), grid_y_->size());
    for (Eigen::Index i = 0; i < grid_x_->size(); ++i) {
      for (Eigen::Index j = 0; j < grid_y_->size(); ++j) {
        f(i, j) = oracle_->value(row_view(grid_x_->points(), i), row_view(grid_y_->points(), j));
      }
    }
    cache_ = std::move(f);
  }
}

Vector GameGrid::mean_over_y(const GridDensity& q) const {
  if (!q.grid().same_as(*grid_y_)) throw DimensionMismatch("q does not live on the y grid");
  const Vector wq = grid_y_->weights().cwiseProduct(q.density());
  if (cache_) return *cache_ * wq;
  Vector out(grid_x_->size());
  for (Eigen::Index i = 0; i < grid_x_->size(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < grid_y_->size(); ++j) {
      s += wq[j] * oracle_->value(row_view(grid_x_->points(), i), row_view(grid_y_->points(), j));
    }
    out[i] = s;
  }
  return out;
}

Vector GameGrid::mean_over_x(const GridDensity& p) const {
  if (!p.grid().same_as(*grid_x_)) throw DimensionMismatch("p does not live on the x grid");
  const Vector wp = grid_x_->weights().cwiseProduct(p.density());
  if (cache_) return cache_->transpose() * wp;
  Vector out = Vector::Zero(grid_y_->size());
  for (Eigen::Index i = 0; i < grid_x_->size(); ++i) {
    for (Eigen::Index j = 0; j < grid_y_->size(); ++j) {
      out[j] += wp[i] * oracle_->value(row_view(grid_x_->points(), i), row_view(grid_y_->points(), j));
    }
  }
  return out;
}

double GameGrid::mean_payoff(const GridDensity& p, const GridDensity& q) const {
  return q.expectation(mean_over_x(p));
}

GameGrid make_game_grid(PayoffPtr oracle, double lambda1, double lambda2, int nodes_per_axis,
                        double offset) {
  const double r = default_grid_radius(lambda1, lambda2, offset);
  auto gx = make_grid(oracle->dim_x(), nodes_per_axis, r);
  auto gy = oracle->dim_y() == oracle->dim_x() ? gx : make_grid(oracle->dim_y(), nodes_per_axis, r);
  return GameGrid(std::move(oracle), std::move(gx), std::move(gy));
}

namespace {

void require_normalized(const GridDensity& d, const char* name) {
  if (std::abs(d.integral() - 1.0) > 1e-8) {
    throw InvalidArgument(std::string(name) + " is not normalized on its grid");
  }
}

}  // namespace

double functional_L(const GridDensity& p, const GridDensity& q, const GameGrid& game,
                    double lambda1, double lambda2) {
  require_normalized(p, "p");
  require_normalized(q, "q");
  return game.mean_payoff(p, q) + lambda1 * p.second_moment() + lambda2 * p.neg_entropy() -
         lambda1 * q.second_moment() - lambda2 * q.neg_entropy();
}

GridDensity best_response(const GridDensity& opponent_density, const GameGrid& game,
                          double lambda1, double lambda2, Player responder) {
  const GridPtr& grid = game.grid(responder);
  const Vector sq = grid->points().rowwise().squaredNorm();
  Vector energy;
  if (responder == Player::kMin) {
    energy = game.mean_over_y(opponent_density) + lambda1 * sq;
  } else {
    energy = -game.mean_over_x(opponent_density) + lambda1 * sq;
  }
  return GridDensity::from_log_unnormalized(grid, -energy / lambda2);
}

GapReport duality_gap(const GridDensity& p, const GridDensity& q, const GameGrid& game,
                      double lambda1, double lambda2) {
  GapReport r;
  r.value = functional_L(p, q, game, lambda1, lambda2);
  const GridDensity q_best = best_response(p, game, lambda1, lambda2, Player::kMax);
  const GridDensity p_best = best_response(q, game, lambda1, lambda2, Player::kMin);
  r.max_over_q = functional_L(p, q_best, game, lambda1, lambda2);
  r.min_over_p = functional_L(p_best, q, game, lambda1, lambda2);
  r.gap = r.max_over_q - r.min_over_p;
  r.nodes_per_axis = game.grid_x()->nodes_per_axis();
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  return r;
}

GridDensity prior_density(GridPtr grid, double lambda1, double lambda2) {
  const Vector logu = -(lambda1 / lambda2) * grid->points().rowwise().squaredNorm();
  return GridDensity::from_log_unnormalized(std::move(grid), logu);
}

FixedPointResult mne_fixed_point(const GameGrid& game, double lambda1, double lambda2,
                                 const FixedPointConfig& cfg) {
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("lambda1 and lambda2 must be positive");
  FixedPointResult res;
  res.p = prior_density(game.grid_x(), lambda1, lambda2);
  res.q = prior_density(game.grid_y(), lambda1, lambda2);
  const double d = cfg.damping;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Vector p_new = (1.0 - d) * res.p.density() +
                         d * best_response(res.q, game, lambda1, lambda2, Player::kMin).density();
    GridDensity p_next = GridDensity::from_log_unnormalized(game.grid_x(), p_new.array().log());
    const Vector q_new = (1.0 - d) * res.q.density() +
                         d * best_response(p_next, game, lambda1, lambda2, Player::kMax).density();
    GridDensity q_next = GridDensity::from_log_unnormalized(game.grid_y(), q_new.array().log());
    res.last_delta = std::max(total_variation(p_next, res.p), total_variation(q_next, res.q));
    res.p = std::move(p_next);
    res.q = std::move(q_next);
    res.iterations = it;
    if (res.last_delta < cfg.tol) {
      res.gap = duality_gap(res.p, res.q, game, lambda1, lambda2);
      return res;
    }
  }
  throw NumericalError("fixed-point iteration did not converge; last TV change " +
                       std::to_string(res.last_delta));
}

GridDensity gibbs_density(GridPtr grid, const FlattenedPotential& potential) {
  if (grid->dim() != potential.dim()) throw DimensionMismatch("grid and potential dimensions differ");
  Vector values;
  potential.evaluator().evaluate(grid->points(), &values, nullptr);
  return GridDensity::from_log_unnormalized(std::move(grid), -values);
}

MetricsReport metrics(const GridDensity& p, const GridDensity& q, const GridDensity& p_ref,
                      const GridDensity& q_ref) {
  return {kl_divergence(p, p_ref), kl_divergence(q, q_ref), total_variation(p, p_ref),
          total_variation(q, q_ref)};
}

double gaussian_kl(const Vector& m1, const Eigen::MatrixXd& s1, const Vector& m2,
                   const Eigen::MatrixXd& s2) {
  const Eigen::Index d = m1.size();
  if (m2.size() != d || s1.rows() != d || s1.cols() != d || s2.rows() != d || s2.cols() != d) {
    throw DimensionMismatch("gaussian_kl: inconsistent dimensions");
  }
  const Eigen::LLT<Eigen::MatrixXd> c1(s1), c2(s2);
  if (c1.info() != Eigen::Success || c2.info() != Eigen::Success) {
    throw InvalidArgument("gaussian_kl: covariances must be positive definite");
  }
  const Vector diff = m2 - m1;
  const double trace = c2.solve(s1).trace();
  const double maha = diff.dot(c2.solve(diff));
  const double logdet1 = 2.0 * c1.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double logdet2 = 2.0 * c2.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return 0.5 * (trace + maha - static_cast<double>(d) + logdet2 - logdet1);
}

}  // namespace papal
