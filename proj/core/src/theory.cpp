#include "papal/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace papal {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
}

}  // namespace

LsiReport lsi_report(double lambda1, double lambda2, int dim_x, int dim_y) {
  require_positive(lambda1, "lambda1");
  require_positive(lambda2, "lambda2");
  if (dim_x < 1 || dim_y < 1) throw InvalidArgument("dimensions must be >= 1");
  LsiReport r;
  const double ratio = lambda1 / lambda2;
  r.alpha_p = ratio * std::exp(-4.0 / lambda2);
  r.alpha_q = ratio * std::exp(-12.0 / lambda2);
  r.sigma2_p = lambda2 * dim_x / (2.0 * lambda1) * std::exp(2.0 / lambda2);
  r.sigma2_q = lambda2 * dim_y / (2.0 * lambda1) * std::exp(6.0 / lambda2);
  r.c_p = std::min({0.5, r.alpha_p, r.alpha_p / (2.0 * r.sigma2_p)});
  r.c_q = std::min({0.5, r.alpha_q, r.alpha_q / (2.0 * r.sigma2_q)});
  return r;
}

double potential_gradient_lipschitz(Player side, double lipschitz_grad, double lambda1,
                                    double lambda2) {
  const double payoff = side == Player::kMax ? 3.0 * lipschitz_grad : lipschitz_grad;
  return (payoff + 2.0 * lambda1) / lambda2;
}

TheoreticalSchedule theoretical_schedule(double lambda1, double lambda2, double lipschitz_grad,
                                         int dim, double epsilon, int J, long long T,
                                         double constant) {
  require_positive(lambda1, "lambda1");
  require_positive(lambda2, "lambda2");
  require_positive(epsilon, "epsilon");
  if (!(lipschitz_grad >= 0.0)) throw InvalidArgument("L1 must be non-negative");
  if (dim < 1 || J < 1 || T < 1) throw InvalidArgument("dim, J and T must be >= 1");
  if (!(constant >= 0.0)) throw InvalidArgument("constant must be non-negative");

  TheoreticalSchedule s;
  s.lsi = lsi_report(lambda1, lambda2, dim, dim);
  s.lipschitz_x = potential_gradient_lipschitz(Player::kMin, lipschitz_grad, lambda1, lambda2);
  s.lipschitz_y = potential_gradient_lipschitz(Player::kMax, lipschitz_grad, lambda1, lambda2);

  const double d = dim;
  const double ratio = lambda1 / lambda2;
  const double log_decay = -2.0 * J * std::log(static_cast<double>(T));
  const double lead = lambda1 * lambda2 /
                      (32.0 * std::pow(3.0 * lipschitz_grad + lambda1, 2) * d);
  // The three candidates in log space so that large 1/lambda2 does not overflow.
  const double log_min = std::min({-std::log(2.0) - 12.0 / lambda2,
                                   std::log(ratio) - 24.0 / lambda2,
                                   2.0 * std::log(ratio) - std::log(d) - 30.0 / lambda2});
  s.step = std::exp(std::log(lead) + log_decay + log_min);
  if (!(s.step > 0.0) || !std::isfinite(s.step)) {
    throw NumericalError("theoretical ULA step size underflows to zero for these parameters");
  }

  const double bracket =
      std::max({3.0, 24.0 / lambda2 + std::log(ratio) + 2.0,
                30.0 / lambda2 + std::log(d) + 3.0 * std::log(ratio) + 1.0}) +
      2.0 * J * std::log(static_cast<double>(T)) + constant;
  s.iterations_y = std::max(1.0, std::ceil(bracket / (s.step * s.lsi.alpha_q)));
  s.iterations_x = std::max(1.0, std::ceil(bracket / (s.step * s.lsi.alpha_p)));
  s.inner_error_target = 0.5 * std::min(s.lsi.c_p, s.lsi.c_q) * std::exp(log_decay);
  return s;
}

double g_lambda(double lambda2) {
  require_positive(lambda2, "lambda2");
  return std::log1p(lambda2 + lambda2 * lambda2);
}

long long suggested_outer_iterations(double epsilon, double lambda1, double lambda2, int J,
                                     double constant) {
  require_positive(epsilon, "epsilon");
  require_positive(lambda1, "lambda1");
  if (J < 1) throw InvalidArgument("J must be >= 1");
  const double geometric = std::log((1.0 + 1.0 / lambda2) / epsilon) / g_lambda(lambda2);
  const double polynomial = (32.0 + 10.0 * lambda1 + lambda2) * std::pow(epsilon, -1.0 / J);
  const double t = std::ceil(constant * std::max(geometric, polynomial));
  if (!(t < 9e18)) throw NumericalError("suggested outer iteration count overflows");
  return std::max(1LL, static_cast<long long>(t));
}

double sample_radius(double epsilon, double lambda1, double lambda2, int dim, double constant) {
  return 8.0 * std::sqrt((lambda2 + constant) / lambda1 *
                         std::max(std::log(1.0 / epsilon), static_cast<double>(dim)));
}

std::uint64_t sample_size_for(double epsilon, double delta, double lambda1, double lambda2,
                              double lipschitz_value, int dim, double constant) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  require_positive(lambda1, "lambda1");
  require_positive(lambda2, "lambda2");
  if (!(lipschitz_value >= 0.0)) throw InvalidArgument("L0 must be non-negative");
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(constant >= 0.0)) throw InvalidArgument("constant must be non-negative");
  const double r = sample_radius(epsilon, lambda1, lambda2, dim, constant);
  const double bound = 128.0 *
                       (-std::log(delta / 2.0) +
                        dim * std::log1p(16.0 * r * lipschitz_value / epsilon)) /
                       (epsilon * epsilon);
  const double m = std::ceil(bound);
  if (!(m < 1.8e19)) throw NumericalError("sample size overflows");
  return static_cast<std::uint64_t>(m);
}

}  // namespace papal
