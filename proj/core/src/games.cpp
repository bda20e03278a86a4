#include "papal/games.hpp"

#include <cmath>
#include <sstream>

namespace papal {

ConstantPayoff::ConstantPayoff(int dim_x, int dim_y, double c)
    : PayoffOracle(dim_x, dim_y, 0.0, 0.0, std::abs(c)), c_(c) {}

std::string ConstantPayoff::name() const {
  std::ostringstream os;
  os << "constant(" << c_ << ")";
  return os.str();
}

void ConstantPayoff::grad_x(Point, Point, MutPoint out) const { std::fill(out.begin(), out.end(), 0.0); }
void ConstantPayoff::grad_y(Point, Point, MutPoint out) const { std::fill(out.begin(), out.end(), 0.0); }

void ConstantPayoff::features(Player, Point, MutPoint out) const { out[0] = 1.0; }

double ConstantPayoff::contract(Player, Point coeffs, Point, MutPoint grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  return coeffs[0];
}

SinePayoff::SinePayoff(int dim, double shift, double amplitude)
    : PayoffOracle(dim, dim, std::abs(amplitude) / std::sqrt(static_cast<double>(dim)),
                   std::sqrt(2.0) * std::abs(amplitude) / dim, std::abs(amplitude)),
      shift_(shift),
      amplitude_(amplitude) {}

std::string SinePayoff::name() const {
  std::ostringstream os;
  os << (shift_ == 0.0 ? "sine-symmetric" : "sine-shifted") << "(d=" << dim_x()
     << ",shift=" << shift_ << ",amp=" << amplitude_ << ")";
  return os.str();
}

double SinePayoff::value(Point x, Point y) const {
  double s = 0.0;
  for (int i = 0; i < dim_x(); ++i) s += std::sin(x[i] + shift_) * std::sin(y[i]);
  return amplitude_ / dim_x() * s;
}

void SinePayoff::grad_x(Point x, Point y, MutPoint out) const {
  const double c = amplitude_ / dim_x();
  for (int i = 0; i < dim_x(); ++i) out[i] = c * std::cos(x[i] + shift_) * std::sin(y[i]);
}

void SinePayoff::grad_y(Point x, Point y, MutPoint out) const {
  const double c = amplitude_ / dim_x();
  for (int i = 0; i < dim_x(); ++i) out[i] = c * std::sin(x[i] + shift_) * std::cos(y[i]);
}

std::optional<SeparableView> SinePayoff::separable() const {
  return SeparableView{this, amplitude_ / dim_x()};
}

void SinePayoff::features(Player player, Point z, MutPoint out) const {
  const double phase = player == Player::kMin ? shift_ : 0.0;
  for (int i = 0; i < dim_x(); ++i) out[i] = std::sin(z[i] + phase);
}

double SinePayoff::contract(Player player, Point coeffs, Point z, MutPoint grad) const {
  const double phase = player == Player::kMin ? shift_ : 0.0;
  double s = 0.0;
  for (int i = 0; i < dim_x(); ++i) {
    s += coeffs[i] * std::sin(z[i] + phase);
    grad[i] = coeffs[i] * std::cos(z[i] + phase);
  }
  return s;
}

namespace {

double auto_radius(const Vector& target) {
  return 3.0 * std::sqrt(static_cast<double>(target.size())) + target.norm();
}

// Gradient norm bound of tanh(<y, x - t>) on |x|, |y| <= R.
double gan_l0(const Vector& target, double radius) {
  const double r = radius > 0 ? radius : auto_radius(target);
  const double shifted = r + target.norm();
  return std::sqrt(r * r + shifted * shifted);
}

constexpr Eigen::Index kQueryChunk = 256;

double gan_l1(const Vector& target, double radius) {
  const double l0 = gan_l0(target, radius);
  // sup|tanh''| = 4 / (3 sqrt 3) ~ 0.77, plus the bilinear cross term.
  return 4.0 / (3.0 * std::sqrt(3.0)) * l0 * l0 + 1.0;
}

}  // namespace

GanGaussPayoff::GanGaussPayoff(Vector target, double radius)
    : PayoffOracle(static_cast<int>(target.size()), static_cast<int>(target.size()),
                   gan_l0(target, radius), gan_l1(target, radius)),
      target_(std::move(target)) {}

double GanGaussPayoff::value(Point x, Point y) const {
  double u = 0.0;
  for (int i = 0; i < dim_x(); ++i) u += y[i] * (x[i] - target_[i]);
  return std::tanh(u);
}

void GanGaussPayoff::grad_x(Point x, Point y, MutPoint out) const {
  const double t = value(x, y);
  const double s = 1.0 - t * t;
  for (int i = 0; i < dim_x(); ++i) out[i] = s * y[i];
}

void GanGaussPayoff::grad_y(Point x, Point y, MutPoint out) const {
  const double t = value(x, y);
  const double s = 1.0 - t * t;
  for (int i = 0; i < dim_x(); ++i) out[i] = s * (x[i] - target_[i]);
}

void GanGaussPayoff::average_against(Player atoms_player, const Matrix& atoms,
                                     const Matrix& queries, Vector& values, Matrix& grads) const {
  const int d = dim_x();
  if (atoms.cols() != d || queries.cols() != d) {
    throw DimensionMismatch("gan-gauss average_against: dimension mismatch");
  }
  const Eigen::Index count = atoms.rows();
  values.resize(queries.rows());
  grads.resize(queries.rows(), d);
  if (count == 0) {
    values.setZero();
    grads.setZero();
    return;
  }
  // Inner products <y, x - t> for a block of queries against every atom.
  Matrix shifted_atoms;
  if (atoms_player == Player::kMin) shifted_atoms = atoms.rowwise() - target_.transpose();
  const Matrix& right = atoms_player == Player::kMin ? shifted_atoms : atoms;
  const double inv = 1.0 / static_cast<double>(count);
  for (Eigen::Index start = 0; start < queries.rows(); start += kQueryChunk) {
    const Eigen::Index rows = std::min(kQueryChunk, queries.rows() - start);
    Matrix left = queries.middleRows(start, rows);
    if (atoms_player == Player::kMax) left.rowwise() -= target_.transpose();
    Matrix u = left * right.transpose();
    Matrix sech2(rows, count);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index r = 0; r < count; ++r) {
        const double t = std::tanh(u(i, r));
        u(i, r) = t;
        sech2(i, r) = 1.0 - t * t;
      }
    }
    values.segment(start, rows) = u.rowwise().sum() * inv;
    grads.middleRows(start, rows) = (sech2 * right) * inv;
  }
}

LandscapePayoff::LandscapePayoff(int dim_x, int dim_y, double center)
    : PayoffOracle(dim_x, dim_y, 0.6 / std::sqrt(static_cast<double>(dim_x)) + 0.8 * std::exp(-0.5),
                   1.8 / dim_x + 0.8),
      center_(center) {}

double LandscapePayoff::landscape(Point x) const {
  double ripple = 0.0;
  double dist2 = 0.0;
  for (int i = 0; i < dim_x(); ++i) {
    ripple += std::cos(3.0 * x[i]);
    dist2 += (x[i] - center_) * (x[i] - center_);
  }
  return 0.2 * ripple / dim_x() - 0.8 * std::exp(-0.5 * dist2);
}

double LandscapePayoff::value(Point x, Point) const { return landscape(x); }

void LandscapePayoff::grad_x(Point x, Point, MutPoint out) const {
  double dist2 = 0.0;
  for (int i = 0; i < dim_x(); ++i) dist2 += (x[i] - center_) * (x[i] - center_);
  const double bump = 0.8 * std::exp(-0.5 * dist2);
  for (int i = 0; i < dim_x(); ++i) {
    out[i] = -0.6 * std::sin(3.0 * x[i]) / dim_x() + bump * (x[i] - center_);
  }
}

void LandscapePayoff::grad_y(Point, Point, MutPoint out) const {
  std::fill(out.begin(), out.end(), 0.0);
}

void LandscapePayoff::features(Player player, Point z, MutPoint out) const {
  out[0] = player == Player::kMin ? landscape(z) : 1.0;
}

double LandscapePayoff::contract(Player player, Point coeffs, Point z, MutPoint grad) const {
  if (player == Player::kMax) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return coeffs[0];
  }
  grad_x(z, z, grad);
  for (double& g : grad) g *= coeffs[0];
  return coeffs[0] * landscape(z);
}

Vector gan_target_mean(int dim, double scale, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("gan-gauss dimension must be >= 1");
  ParticleRng rng(CounterStream(mix64(seed ^ 0x6a09e667f3bcc909ULL)));
  Vector m(dim);
  for (int i = 0; i < dim; ++i) m[i] = scale * rng.normal();
  return m;
}

PayoffPtr make_builtin(const std::string& identifier, const GameParams& params) {
  const int m = params.dim;
  const int n = params.dim_y > 0 ? params.dim_y : params.dim;
  if (m < 1 || n < 1) throw InvalidArgument("game dimension must be >= 1");
  const bool square = m == n;
  if (identifier == "sine-symmetric" || identifier == "sine-shifted") {
    if (!square) throw InvalidArgument(identifier + " requires dim_x == dim_y");
    if (!(std::abs(params.amplitude) <= 1.0)) {
      throw InvalidArgument("sine amplitude must lie in [-1, 1]");
    }
    const double shift = identifier == "sine-symmetric" ? 0.0 : params.shift;
    return std::make_shared<SinePayoff>(m, shift, params.amplitude);
  }
  if (identifier == "gan-gauss") {
    if (!square) throw InvalidArgument("gan-gauss requires dim_x == dim_y");
    if (!(params.target_scale >= 0.0)) throw InvalidArgument("gan-gauss target_scale must be >= 0");
    return std::make_shared<GanGaussPayoff>(
        gan_target_mean(m, params.target_scale, params.target_seed), params.radius);
  }
  if (identifier == "landscape-min") {
    return std::make_shared<LandscapePayoff>(m, n, params.center);
  }
  if (identifier == "constant") {
    if (!(std::abs(params.value) <= 1.0)) throw InvalidArgument("constant payoff must lie in [-1, 1]");
    return std::make_shared<ConstantPayoff>(m, n, params.value);
  }
  throw InvalidArgument("unknown game identifier '" + identifier + "'");
}

}  // namespace papal
