#pragma once

#include <iosfwd>
#include <memory>

#include "papal/types.hpp"

namespace papal {

// Uniform tensor grid on [lo, hi]^dim (dim 1 or 2) with trapezoid weights.
class Grid {
 public:
  Grid(int dim, int nodes_per_axis, double lo, double hi);

  int dim() const { return dim_; }
  int nodes_per_axis() const { return nodes_; }
  Eigen::Index size() const { return points_.rows(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double spacing() const { return (hi_ - lo_) / (nodes_ - 1); }

  // One node per row; for dim 2 the first coordinate varies slowest.
  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }

  bool same_as(const Grid& other) const;

 private:
  int dim_;
  int nodes_;
  double lo_;
  double hi_;
  Matrix points_;
  Vector weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int nodes_per_axis, double radius);

// 6 sqrt(lambda2 / (2 lambda1)) + offset.
double default_grid_radius(double lambda1, double lambda2, double offset);

// Floor applied to normalized log-densities.
inline constexpr double kLogDensityFloor = -60.0;

// Normalized density on a grid, stored as log p at the nodes.
class GridDensity {
 public:
  GridDensity() = default;

  // Normalizes exp(log_unnormalized) with log-sum-exp.
  static GridDensity from_log_unnormalized(GridPtr grid, const Vector& log_unnormalized);
  // Reinterprets already normalized values (checked to 1e-8).
  static GridDensity from_density(GridPtr grid, const Vector& density);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Vector& log_density() const { return log_density_; }
  Vector density() const { return log_density_.array().exp(); }

  double integral() const;
  // Trapezoid estimate of E_p[values].
  double expectation(const Vector& values) const;
  // E_p[log p].
  double neg_entropy() const;
  double second_moment() const;
  Vector mean() const;

 private:
  GridPtr grid_;
  Vector log_density_;
};

// CSV with one row per node: coordinates, then log_density.
void write_csv(const GridDensity& density, std::ostream& out);
GridDensity read_grid_density_csv(std::istream& in);

double kl_divergence(const GridDensity& p, const GridDensity& q);
double total_variation(const GridDensity& p, const GridDensity& q);

}  // namespace papal
