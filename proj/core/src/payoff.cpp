#include "papal/payoff.hpp"

#include <cmath>
#include <sstream>

#include "papal/summation.hpp"

namespace papal {

PayoffOracle::PayoffOracle(int dim_x, int dim_y, double lipschitz_value, double lipschitz_grad,
                           double sup_abs)
    : dim_x_(dim_x),
      dim_y_(dim_y),
      lipschitz_value_(lipschitz_value),
      lipschitz_grad_(lipschitz_grad),
      sup_abs_(sup_abs) {
  if (dim_x < 1 || dim_y < 1) throw InvalidArgument("payoff dimensions must be >= 1");
  if (!(sup_abs >= 0.0 && sup_abs <= 1.0)) {
    throw InvalidArgument("payoff must be bounded by 1 in absolute value");
  }
}

void PayoffOracle::average_against(Player atoms_player, const Matrix& atoms, const Matrix& queries,
                                   Vector& values, Matrix& grads) const {
  const Player query_player = opponent(atoms_player);
  const int qdim = dim(query_player);
  if (atoms.cols() != dim(atoms_player) || queries.cols() != qdim) {
    throw DimensionMismatch("average_against: atom/query dimension does not match the payoff");
  }
  const Eigen::Index count = atoms.rows();
  values.resize(queries.rows());
  grads.resize(queries.rows(), qdim);

  std::vector<double> vals(static_cast<std::size_t>(count));
  Matrix per_atom(count, qdim);
  for (Eigen::Index q = 0; q < queries.rows(); ++q) {
    const Point z = row_view(queries, q);
    for (Eigen::Index r = 0; r < count; ++r) {
      const Point a = row_view(atoms, r);
      if (atoms_player == Player::kMin) {
        vals[static_cast<std::size_t>(r)] = value(a, z);
        grad_y(a, z, row_view(per_atom, r));
      } else {
        vals[static_cast<std::size_t>(r)] = value(z, a);
        grad_x(z, a, row_view(per_atom, r));
      }
    }
    values[q] = count == 0 ? 0.0 : pairwise_sum(vals) / static_cast<double>(count);
    grads.row(q) = pairwise_column_mean(per_atom).transpose();
  }
}

ScaledPayoff::ScaledPayoff(PayoffPtr base, double scale)
    : PayoffOracle(base->dim_x(), base->dim_y(), std::abs(scale) * base->lipschitz_value(),
                   std::abs(scale) * base->lipschitz_grad(),
                   std::min(1.0, std::abs(scale) * base->sup_abs())),
      base_(std::move(base)),
      scale_(scale) {
  if (std::abs(scale_) * base_->sup_abs() > 1.0 + 1e-12) {
    throw InvalidArgument("scaled payoff would exceed the unit bound");
  }
}

std::string ScaledPayoff::name() const {
  std::ostringstream os;
  os << base_->name() << "*" << scale_;
  return os.str();
}

double ScaledPayoff::value(Point x, Point y) const { return scale_ * base_->value(x, y); }

void ScaledPayoff::grad_x(Point x, Point y, MutPoint out) const {
  base_->grad_x(x, y, out);
  for (double& g : out) g *= scale_;
}

void ScaledPayoff::grad_y(Point x, Point y, MutPoint out) const {
  base_->grad_y(x, y, out);
  for (double& g : out) g *= scale_;
}

std::optional<SeparableView> ScaledPayoff::separable() const {
  auto view = base_->separable();
  if (!view) return std::nullopt;
  view->scale *= scale_;
  return view;
}

void ScaledPayoff::average_against(Player atoms_player, const Matrix& atoms,
                                   const Matrix& queries, Vector& values, Matrix& grads) const {
  base_->average_against(atoms_player, atoms, queries, values, grads);
  values *= scale_;
  grads *= scale_;
}

FunctionPayoff::FunctionPayoff(int dim_x, int dim_y, ValueFn value, GradFn grad_x, GradFn grad_y,
                               double lipschitz_value, double lipschitz_grad, std::string name)
    : PayoffOracle(dim_x, dim_y, lipschitz_value, lipschitz_grad),
      value_(std::move(value)),
      grad_x_(std::move(grad_x)),
      grad_y_(std::move(grad_y)),
      name_(std::move(name)) {}

PayoffPtr StochasticPayoffOracle::average_over(std::span<const double> draws) const {
  return std::make_shared<MinibatchPayoff>(shared_from_this(),
                                           std::vector<double>(draws.begin(), draws.end()));
}

MinibatchPayoff::MinibatchPayoff(StochasticPayoffPtr source, std::vector<double> draws)
    : PayoffOracle(source->dim_x(), source->dim_y(), source->mean()->lipschitz_value(),
                   source->mean()->lipschitz_grad()),
      source_(std::move(source)),
      draws_(std::move(draws)) {
  if (draws_.empty()) throw InvalidArgument("minibatch payoff needs at least one draw");
}

std::string MinibatchPayoff::name() const {
  return source_->mean()->name() + "[minibatch " + std::to_string(draws_.size()) + "]";
}

double MinibatchPayoff::value(Point x, Point y) const {
  std::vector<double> vals(draws_.size());
  for (std::size_t i = 0; i < draws_.size(); ++i) vals[i] = source_->value_noisy(x, y, draws_[i]);
  return pairwise_sum(vals) / static_cast<double>(draws_.size());
}

void MinibatchPayoff::grad_x(Point x, Point y, MutPoint out) const {
  Matrix per(static_cast<Eigen::Index>(draws_.size()), dim_x());
  for (std::size_t i = 0; i < draws_.size(); ++i) {
    source_->grad_x_noisy(x, y, draws_[i], row_view(per, static_cast<Eigen::Index>(i)));
  }
  const Vector mean = pairwise_column_mean(per);
  std::copy(mean.data(), mean.data() + mean.size(), out.begin());
}

void MinibatchPayoff::grad_y(Point x, Point y, MutPoint out) const {
  Matrix per(static_cast<Eigen::Index>(draws_.size()), dim_y());
  for (std::size_t i = 0; i < draws_.size(); ++i) {
    source_->grad_y_noisy(x, y, draws_[i], row_view(per, static_cast<Eigen::Index>(i)));
  }
  const Vector mean = pairwise_column_mean(per);
  std::copy(mean.data(), mean.data() + mean.size(), out.begin());
}

MultiplicativeNoisePayoff::MultiplicativeNoisePayoff(PayoffPtr base, double amplitude)
    : base_(std::move(base)), amplitude_(amplitude) {
  if (!(amplitude_ >= 0.0 && amplitude_ <= 1.0)) {
    throw InvalidArgument("multiplicative noise amplitude must lie in [0, 1]");
  }
  if (base_->sup_abs() * (1.0 + amplitude_) > 1.0 + 1e-12) {
    throw InvalidArgument("sup|f| * (1 + amplitude) must not exceed 1; rescale the base game");
  }
}

double MultiplicativeNoisePayoff::sample_noise(CounterStream& rng) const {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

double MultiplicativeNoisePayoff::value_noisy(Point x, Point y, double xi) const {
  return multiplier(xi) * base_->value(x, y);
}

void MultiplicativeNoisePayoff::grad_x_noisy(Point x, Point y, double xi, MutPoint out) const {
  base_->grad_x(x, y, out);
  for (double& g : out) g *= multiplier(xi);
}

void MultiplicativeNoisePayoff::grad_y_noisy(Point x, Point y, double xi, MutPoint out) const {
  base_->grad_y(x, y, out);
  for (double& g : out) g *= multiplier(xi);
}

PayoffPtr MultiplicativeNoisePayoff::average_over(std::span<const double> draws) const {
  if (draws.empty()) throw InvalidArgument("minibatch payoff needs at least one draw");
  std::vector<double> s(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) s[i] = multiplier(draws[i]);
  return std::make_shared<ScaledPayoff>(base_, pairwise_sum(s) / static_cast<double>(s.size()));
}

double DegenerateNoisePayoff::sample_noise(CounterStream& rng) const {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

PayoffPtr DegenerateNoisePayoff::average_over(std::span<const double> draws) const {
  if (draws.empty()) throw InvalidArgument("minibatch payoff needs at least one draw");
  return base_;
}

double minibatch_payoff(const StochasticPayoffOracle& oracle, Point x, Point y,
                        std::size_t batch, CounterStream& rng) {
  if (batch == 0) throw InvalidArgument("minibatch size must be >= 1");
  std::vector<double> vals(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    vals[i] = oracle.value_noisy(x, y, oracle.sample_noise(rng));
  }
  return pairwise_sum(vals) / static_cast<double>(batch);
}

}  // namespace papal
