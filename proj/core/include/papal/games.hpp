#pragma once

#include <cstdint>
#include <string>

#include "papal/payoff.hpp"

namespace papal {

struct GameParams {
  int dim = 1;              // m = n = dim unless dim_y is set
  int dim_y = 0;            // 0: same as dim
  double amplitude = 1.0;   // sine games
  double shift = 0.7;       // sine-shifted phase on x
  double target_scale = 1.0;       // gan-gauss: per-coordinate std of the target mean
  std::uint64_t target_seed = 7;   // gan-gauss
  double radius = 0.0;      // gan-gauss: ball on which L0/L1 are declared (0: auto)
  double value = 0.0;       // constant
  double center = 1.5;      // landscape-min: minimizer coordinate
};

// f(x, y) = c.
class ConstantPayoff final : public PayoffOracle, public SeparableBasis {
 public:
  ConstantPayoff(int dim_x, int dim_y, double c);

  std::string name() const override;
  double value(Point, Point) const override { return c_; }
  void grad_x(Point, Point, MutPoint out) const override;
  void grad_y(Point, Point, MutPoint out) const override;
  std::optional<SeparableView> separable() const override { return SeparableView{this, c_}; }

  int rank() const override { return 1; }
  void features(Player player, Point z, MutPoint out) const override;
  double contract(Player player, Point coeffs, Point z, MutPoint grad) const override;

 private:
  double c_;
};

// f(x, y) = (amplitude / d) * sum_i sin(x_i + shift) * sin(y_i).
// shift = 0 is the odd "sine-symmetric" game whose MNE is the prior pair.
class SinePayoff final : public PayoffOracle, public SeparableBasis {
 public:
  SinePayoff(int dim, double shift, double amplitude);

  std::string name() const override;
  double value(Point x, Point y) const override;
  void grad_x(Point x, Point y, MutPoint out) const override;
  void grad_y(Point x, Point y, MutPoint out) const override;
  std::optional<SeparableView> separable() const override;

  int rank() const override { return dim_x(); }
  void features(Player player, Point z, MutPoint out) const override;
  double contract(Player player, Point coeffs, Point z, MutPoint grad) const override;

  double shift() const { return shift_; }
  double amplitude() const { return amplitude_; }

 private:
  double shift_;
  double amplitude_;
};

// Linear-discriminator GAN toy: x is the generator mean, y a linear
// discriminator, f(x, y) = tanh(<y, x - target>). Zero at x = target for all y.
class GanGaussPayoff final : public PayoffOracle {
 public:
  GanGaussPayoff(Vector target, double radius);

  std::string name() const override { return "gan-gauss"; }
  double value(Point x, Point y) const override;
  void grad_x(Point x, Point y, MutPoint out) const override;
  void grad_y(Point x, Point y, MutPoint out) const override;
  void average_against(Player atoms_player, const Matrix& atoms, const Matrix& queries,
                       Vector& values, Matrix& grads) const override;

  const Vector& target() const { return target_; }

 private:
  Vector target_;
};

// Non-convex minimization landscape, constant in y:
// f(x) = 0.2 * mean_i cos(3 x_i) - 0.8 * exp(-|x - c|^2 / 2) with c = center * 1.
class LandscapePayoff final : public PayoffOracle, public SeparableBasis {
 public:
  LandscapePayoff(int dim_x, int dim_y, double center);

  std::string name() const override { return "landscape-min"; }
  double value(Point x, Point y) const override;
  void grad_x(Point x, Point y, MutPoint out) const override;
  void grad_y(Point x, Point y, MutPoint out) const override;
  std::optional<SeparableView> separable() const override { return SeparableView{this, 1.0}; }

  int rank() const override { return 1; }
  void features(Player player, Point z, MutPoint out) const override;
  double contract(Player player, Point coeffs, Point z, MutPoint grad) const override;

  double landscape(Point x) const;
  double center() const { return center_; }

 private:
  double center_;
};

// Identifiers: "sine-symmetric", "sine-shifted", "gan-gauss", "landscape-min", "constant".
PayoffPtr make_builtin(const std::string& identifier, const GameParams& params);

// Target mean used by gan-gauss for the given dimension and parameters.
Vector gan_target_mean(int dim, double scale, std::uint64_t seed);

}  // namespace papal
