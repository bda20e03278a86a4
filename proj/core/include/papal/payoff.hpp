#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "papal/rng.hpp"
#include "papal/types.hpp"

namespace papal {

// Rank-K factorization f(x, y) = sum_k u_k(x) v_k(y). Oracles exposing one let
// ensemble averages collapse to K feature means, which is what makes long
// potential histories cheap to evaluate.
class SeparableBasis {
 public:
  virtual ~SeparableBasis() = default;

  virtual int rank() const = 0;

  // u(x) for the min player, v(y) for the max player.
  virtual void features(Player player, Point z, MutPoint out) const = 0;

  // sum_k coeffs[k] * w_k(z) with w the features of `player`; gradient in z.
  virtual double contract(Player player, Point coeffs, Point z, MutPoint grad) const = 0;
};

struct SeparableView {
  const SeparableBasis* basis = nullptr;
  double scale = 1.0;  // f = scale * sum_k u_k v_k
};

// Bounded payoff f : R^m x R^n -> [-1, 1] with gradients and declared
// regularity constants. Implementations are immutable and thread-safe.
class PayoffOracle {
 public:
  PayoffOracle(int dim_x, int dim_y, double lipschitz_value, double lipschitz_grad,
               double sup_abs = 1.0);
  virtual ~PayoffOracle() = default;

  int dim_x() const { return dim_x_; }
  int dim_y() const { return dim_y_; }
  int dim(Player p) const { return p == Player::kMin ? dim_x_ : dim_y_; }
  double lipschitz_value() const { return lipschitz_value_; }
  double lipschitz_grad() const { return lipschitz_grad_; }
  // Declared bound on |f|; at most 1 for every admissible oracle.
  double sup_abs() const { return sup_abs_; }

  virtual std::string name() const = 0;
  virtual double value(Point x, Point y) const = 0;
  virtual void grad_x(Point x, Point y, MutPoint out) const = 0;
  virtual void grad_y(Point x, Point y, MutPoint out) const = 0;

  virtual std::optional<SeparableView> separable() const { return std::nullopt; }

  // For every row of `queries` (points of the player opposing `atoms_player`)
  // writes the mean over the rows of `atoms` of f and of its gradient with
  // respect to the query point. Default loops with pairwise summation.
  virtual void average_against(Player atoms_player, const Matrix& atoms, const Matrix& queries,
                               Vector& values, Matrix& grads) const;

 private:
  int dim_x_;
  int dim_y_;
  double lipschitz_value_;
  double lipschitz_grad_;
  double sup_abs_;
};

using PayoffPtr = std::shared_ptr<const PayoffOracle>;

// s * f for a fixed scalar s; keeps the separable structure of f.
class ScaledPayoff final : public PayoffOracle {
 public:
  ScaledPayoff(PayoffPtr base, double scale);

  std::string name() const override;
  double value(Point x, Point y) const override;
  void grad_x(Point x, Point y, MutPoint out) const override;
  void grad_y(Point x, Point y, MutPoint out) const override;
  std::optional<SeparableView> separable() const override;
  void average_against(Player atoms_player, const Matrix& atoms, const Matrix& queries,
                       Vector& values, Matrix& grads) const override;

  double scale() const { return scale_; }
  const PayoffPtr& base() const { return base_; }

 private:
  PayoffPtr base_;
  double scale_;
};

// Payoff assembled from callables; used for ad-hoc games and tests.
class FunctionPayoff final : public PayoffOracle {
 public:
  using ValueFn = std::function<double(Point, Point)>;
  using GradFn = std::function<void(Point, Point, MutPoint)>;

  FunctionPayoff(int dim_x, int dim_y, ValueFn value, GradFn grad_x, GradFn grad_y,
                 double lipschitz_value, double lipschitz_grad, std::string name = "function");

  std::string name() const override { return name_; }
  double value(Point x, Point y) const override { return value_(x, y); }
  void grad_x(Point x, Point y, MutPoint out) const override { grad_x_(x, y, out); }
  void grad_y(Point x, Point y, MutPoint out) const override { grad_y_(x, y, out); }

 private:
  ValueFn value_;
  GradFn grad_x_;
  GradFn grad_y_;
  std::string name_;
};

// Stochastic payoff G(x, y, xi) with E[G] = f. The noise variable is scalar.
// Instances must be owned by a shared_ptr (minibatch payoffs keep them alive).
class StochasticPayoffOracle : public std::enable_shared_from_this<StochasticPayoffOracle> {
 public:
  virtual ~StochasticPayoffOracle() = default;

  virtual PayoffPtr mean() const = 0;
  virtual double sample_noise(CounterStream& rng) const = 0;
  virtual double value_noisy(Point x, Point y, double xi) const = 0;
  virtual void grad_x_noisy(Point x, Point y, double xi, MutPoint out) const = 0;
  virtual void grad_y_noisy(Point x, Point y, double xi, MutPoint out) const = 0;

  // The deterministic payoff (1/N) sum_i G(., ., xi_i) for fixed draws.
  virtual PayoffPtr average_over(std::span<const double> draws) const;

  int dim_x() const { return mean()->dim_x(); }
  int dim_y() const { return mean()->dim_y(); }
};

using StochasticPayoffPtr = std::shared_ptr<const StochasticPayoffOracle>;

// Generic minibatch average over a stored list of noise draws.
class MinibatchPayoff final : public PayoffOracle {
 public:
  MinibatchPayoff(StochasticPayoffPtr source, std::vector<double> draws);

  std::string name() const override;
  double value(Point x, Point y) const override;
  void grad_x(Point x, Point y, MutPoint out) const override;
  void grad_y(Point x, Point y, MutPoint out) const override;

  const std::vector<double>& draws() const { return draws_; }

 private:
  StochasticPayoffPtr source_;
  std::vector<double> draws_;
};

// G(x, y, xi) = f(x, y) * (1 + amplitude * xi), xi ~ Uniform[-1, 1].
// Requires sup|f| * (1 + amplitude) <= 1 so that |G| <= 1 for every draw.
class MultiplicativeNoisePayoff final : public StochasticPayoffOracle {
 public:
  MultiplicativeNoisePayoff(PayoffPtr base, double amplitude);

  PayoffPtr mean() const override { return base_; }
  double sample_noise(CounterStream& rng) const override;
  double value_noisy(Point x, Point y, double xi) const override;
  void grad_x_noisy(Point x, Point y, double xi, MutPoint out) const override;
  void grad_y_noisy(Point x, Point y, double xi, MutPoint out) const override;
  PayoffPtr average_over(std::span<const double> draws) const override;

  double amplitude() const { return amplitude_; }
  double multiplier(double xi) const { return 1.0 + amplitude_ * xi; }

 private:
  PayoffPtr base_;
  double amplitude_;
};

// G(x, y, xi) = f(x, y) for every draw; averages return f itself.
class DegenerateNoisePayoff final : public StochasticPayoffOracle {
 public:
  explicit DegenerateNoisePayoff(PayoffPtr base) : base_(std::move(base)) {}

  PayoffPtr mean() const override { return base_; }
  double sample_noise(CounterStream& rng) const override;
  double value_noisy(Point x, Point y, double) const override { return base_->value(x, y); }
  void grad_x_noisy(Point x, Point y, double, MutPoint out) const override { base_->grad_x(x, y, out); }
  void grad_y_noisy(Point x, Point y, double, MutPoint out) const override { base_->grad_y(x, y, out); }
  PayoffPtr average_over(std::span<const double> draws) const override;

 private:
  PayoffPtr base_;
};

// (1/N) sum_i G(x, y, xi_i) with xi_i drawn i.i.d. from the oracle's sampler.
double minibatch_payoff(const StochasticPayoffOracle& oracle, Point x, Point y,
                        std::size_t batch, CounterStream& rng);

}  // namespace papal
