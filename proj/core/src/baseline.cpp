#include "papal/baseline.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "papal/ensemble.hpp"

namespace papal {

WeightedEnsemble WeightedEnsemble::uniform(Matrix positions) {
  if (positions.rows() < 1) throw InvalidArgument("weighted ensemble needs at least one particle");
  WeightedEnsemble we;
  we.log_weights = Vector::Constant(positions.rows(), -std::log(static_cast<double>(positions.rows())));
  we.positions = std::move(positions);
  return we;
}

Vector WeightedEnsemble::mean() const { return positions.transpose() * weights(); }

void WeightedEnsemble::normalize() {
  const double top = log_weights.maxCoeff();
  if (!std::isfinite(top)) throw NumericalError("log-weights are not finite");
  const double lse = top + std::log((log_weights.array() - top).exp().sum());
  log_weights.array() -= lse;
}

WeightedAverages weighted_averages(const WeightedEnsemble& x, const WeightedEnsemble& y,
                                   const PayoffOracle& oracle, const Matrix* payoff_matrix) {
  const Vector wx = x.weights();
  const Vector wy = y.weights();
  WeightedAverages out;
  if (payoff_matrix) {
    out.against_y = *payoff_matrix * wy;
    out.against_x = payoff_matrix->transpose() * wx;
    return out;
  }
  out.against_y = Vector::Zero(x.count());
  out.against_x = Vector::Zero(y.count());
  for (Eigen::Index r = 0; r < x.count(); ++r) {
    for (Eigen::Index s = 0; s < y.count(); ++s) {
      const double f = oracle.value(row_view(x.positions, r), row_view(y.positions, s));
      out.against_y[r] += wy[s] * f;
      out.against_x[s] += wx[r] * f;
    }
  }
  return out;
}

void weight_da_step(WeightedEnsemble& x, WeightedEnsemble& y, const PayoffOracle& oracle,
                    double lambda2, double step, const Matrix* payoff_matrix) {
  if (!(step > 0.0)) throw InvalidArgument("weight step must be positive");
  if (!(lambda2 > 0.0)) throw InvalidArgument("lambda2 must be positive");
  const WeightedAverages avg = weighted_averages(x, y, oracle, payoff_matrix);
  const double rate = step / lambda2;
  x.log_weights -= rate * avg.against_y;
  y.log_weights += rate * avg.against_x;
  x.normalize();
  y.normalize();
}

namespace {

Matrix payoff_matrix(const PayoffOracle& oracle, const Matrix& xs, const Matrix& ys) {
  Matrix f(xs.rows(), ys.rows());
  for (Eigen::Index r = 0; r < xs.rows(); ++r) {
    for (Eigen::Index s = 0; s < ys.rows(); ++s) {
      f(r, s) = oracle.value(row_view(xs, r), row_view(ys, s));
    }
  }
  return f;
}

double max_log_ratio(const WeightedEnsemble& we) {
  const double base = std::log(static_cast<double>(we.count()));
  return (we.log_weights.array() + base).abs().maxCoeff();
}

}  // namespace

BaselineResult run_weight_baseline(PayoffPtr oracle, const BaselineConfig& cfg) {
  if (!oracle) throw InvalidArgument("null payoff");
  if (cfg.T < 1 || cfg.inner_iterations < 1) throw InvalidArgument("baseline iteration counts must be >= 1");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  BaselineResult res;
  res.x = WeightedEnsemble::uniform(
      sample_prior(oracle->dim_x(), cfg.M, cfg.lambda1, cfg.lambda2, {cfg.seed, 0, StreamTag::kPriorX})
          .positions);
  res.y = WeightedEnsemble::uniform(
      sample_prior(oracle->dim_y(), cfg.M, cfg.lambda1, cfg.lambda2, {cfg.seed, 0, StreamTag::kPriorY})
          .positions);
  std::optional<Matrix> f;
  if (static_cast<double>(cfg.M) * static_cast<double>(cfg.M) <= cfg.matrix_limit) {
    f = payoff_matrix(*oracle, res.x.positions, res.y.positions);
  }
  for (int t = 1; t <= cfg.T; ++t) {
    const auto step_start = Clock::now();
    for (int k = 0; k < cfg.inner_iterations; ++k) {
      weight_da_step(res.x, res.y, *oracle, cfg.lambda2, cfg.step, f ? &*f : nullptr);
    }
    IterationRecord rec;
    rec.t = t;
    rec.gap_estimate = std::numeric_limits<double>::quiet_NaN();
    rec.sup_norm_h = max_log_ratio(res.y);
    rec.sup_norm_g = max_log_ratio(res.x);
    rec.inner_accept_rate = 1.0;
    rec.wall_ms = cfg.record_wall_time
                      ? std::chrono::duration<double, std::milli>(Clock::now() - step_start).count()
                      : 0.0;
    res.trace.push_back(rec);
  }
  res.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return res;
}

}  // namespace papal
