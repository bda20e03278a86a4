#include "papal/grid.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace papal {

Grid::Grid(int dim, int nodes_per_axis, double lo, double hi)
    : dim_(dim), nodes_(nodes_per_axis), lo_(lo), hi_(hi) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grids support dimension 1 or 2");
  if (nodes_per_axis < 2) throw InvalidArgument("grid needs at least 2 nodes per axis");
  if (!(hi > lo)) throw InvalidArgument("grid needs hi > lo");
  const double h = spacing();
  Vector axis(nodes_), w(nodes_);
  for (int i = 0; i < nodes_; ++i) {
    axis[i] = lo_ + i * h;
    w[i] = (i == 0 || i == nodes_ - 1) ? 0.5 * h : h;
  }
  if (dim_ == 1) {
    points_ = axis;
    weights_ = w;
    return;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(nodes_) * nodes_;
  points_.resize(n, 2);
  weights_.resize(n);
  for (int i = 0; i < nodes_; ++i) {
    for (int j = 0; j < nodes_; ++j) {
      const Eigen::Index k = static_cast<Eigen::Index>(i) * nodes_ + j;
      points_(k, 0) = axis[i];
      points_(k, 1) = axis[j];
      weights_[k] = w[i] * w[j];
    }
  }
}

bool Grid::same_as(const Grid& other) const {
  return dim_ == other.dim_ && nodes_ == other.nodes_ && lo_ == other.lo_ && hi_ == other.hi_;
}

GridPtr make_grid(int dim, int nodes_per_axis, double radius) {
  return std::make_shared<const Grid>(dim, nodes_per_axis, -radius, radius);
}

double default_grid_radius(double lambda1, double lambda2, double offset) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("lambda1 and lambda2 must be positive");
  return 6.0 * std::sqrt(lambda2 / (2.0 * lambda1)) + offset;
}

GridDensity GridDensity::from_log_unnormalized(GridPtr grid, const Vector& log_unnormalized) {
  if (!grid || log_unnormalized.size() != grid->size()) {
    throw DimensionMismatch("log-density does not match the grid");
  }
  const double top = log_unnormalized.maxCoeff();
  if (!std::isfinite(top)) throw NumericalError("non-finite log-density on grid");
  const double z = (grid->weights().array() * (log_unnormalized.array() - top).exp()).sum();
  GridDensity d;
  d.grid_ = std::move(grid);
  d.log_density_ = (log_unnormalized.array() - top - std::log(z)).max(kLogDensityFloor);
  return d;
}

GridDensity GridDensity::from_density(GridPtr grid, const Vector& density) {
  if (!grid || density.size() != grid->size()) throw DimensionMismatch("density does not match the grid");
  if ((density.array() < 0.0).any()) throw InvalidArgument("negative density");
  const double mass = grid->weights().dot(density);
  if (std::abs(mass - 1.0) > 1e-8) throw InvalidArgument("density is not normalized");
  GridDensity d;
  d.grid_ = std::move(grid);
  d.log_density_ = density.array().log().max(kLogDensityFloor);
  return d;
}

double GridDensity::integral() const { return grid_->weights().dot(density()); }

double GridDensity::expectation(const Vector& values) const {
  if (values.size() != log_density_.size()) throw DimensionMismatch("values do not match the grid");
  return (grid_->weights().array() * density().array() * values.array()).sum();
}

double GridDensity::neg_entropy() const { return expectation(log_density_); }

double GridDensity::second_moment() const {
  return expectation(grid_->points().rowwise().squaredNorm());
}

Vector GridDensity::mean() const {
  const Vector wp = grid_->weights().cwiseProduct(density());
  return grid_->points().transpose() * wp;
}

void write_csv(const GridDensity& density, std::ostream& out) {
  const Grid& g = density.grid();
  out << "# grid dim=" << g.dim() << " nodes=" << g.nodes_per_axis() << std::setprecision(17)
      << " lo=" << g.lo() << " hi=" << g.hi() << '\n';
  out << (g.dim() == 1 ? "x" : "x0,x1") << ",log_density\n";
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    for (int i = 0; i < g.dim(); ++i) out << g.points()(k, i) << ',';
    out << density.log_density()[k] << '\n';
  }
}

GridDensity read_grid_density_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# grid", 0) != 0) {
    throw InvalidArgument("grid csv: missing header");
  }
  int dim = 0, nodes = 0;
  double lo = 0.0, hi = 0.0;
  std::istringstream hs(line.substr(7));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "dim") dim = std::stoi(val);
    else if (key == "nodes") nodes = std::stoi(val);
    else if (key == "lo") lo = std::stod(val);
    else if (key == "hi") hi = std::stod(val);
  }
  auto grid = std::make_shared<const Grid>(dim, nodes, lo, hi);
  std::getline(in, line);
  Vector logp(grid->size());
  for (Eigen::Index k = 0; k < grid->size(); ++k) {
    if (!std::getline(in, line)) throw InvalidArgument("grid csv: truncated");
    logp[k] = std::stod(line.substr(line.rfind(',') + 1));
  }
  return GridDensity::from_log_unnormalized(grid, logp);
}

namespace {

void require_same_grid(const GridDensity& p, const GridDensity& q) {
  if (!p.grid().same_as(q.grid())) throw DimensionMismatch("densities live on different grids");
}

}  // namespace

double kl_divergence(const GridDensity& p, const GridDensity& q) {
  require_same_grid(p, q);
  return p.expectation(p.log_density() - q.log_density());
}

double total_variation(const GridDensity& p, const GridDensity& q) {
  require_same_grid(p, q);
  return 0.5 * p.grid().weights().dot((p.density() - q.density()).cwiseAbs());
}

}  // namespace papal
