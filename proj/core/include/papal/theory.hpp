#pragma once

#include <cstdint>

#include "papal/types.hpp"

namespace papal {

// Log-Sobolev constants of the proximal Gibbs densities (Holley-Stroock
// perturbation of the Gaussian prior) and second-moment bounds.
struct LsiReport {
  double alpha_p = 0.0;   // (lambda1 / lambda2) exp(-4 / lambda2)
  double alpha_q = 0.0;   // (lambda1 / lambda2) exp(-12 / lambda2)
  double sigma2_p = 0.0;  // lambda2 m / (2 lambda1) exp(2 / lambda2)
  double sigma2_q = 0.0;  // lambda2 n / (2 lambda1) exp(6 / lambda2)
  double c_p = 0.0;       // min{1/2, alpha, alpha / (2 sigma^2)}
  double c_q = 0.0;
};

LsiReport lsi_report(double lambda1, double lambda2, int dim_x, int dim_y);

// Gradient-Lipschitz bound of the potential on each side, quadratic included:
// (3 L1 + 2 lambda1) / lambda2 for y, (L1 + 2 lambda1) / lambda2 for x.
double potential_gradient_lipschitz(Player side, double lipschitz_grad, double lambda1,
                                    double lambda2);

struct TheoreticalSchedule {
  double step = 0.0;           // iota
  double iterations_x = 0.0;   // inner iterations, ceiled
  double iterations_y = 0.0;
  double inner_error_target = 0.0;  // (1/2) min{c_p, c_q} T^(-2J)
  double lipschitz_x = 0.0;
  double lipschitz_y = 0.0;
  LsiReport lsi;
};

// ULA step size and inner iteration counts guaranteeing the inner error target,
// d = max{m, n}. `constant` is the additive C inside the iteration bracket.
TheoreticalSchedule theoretical_schedule(double lambda1, double lambda2, double lipschitz_grad,
                                         int dim, double epsilon, int J, long long T,
                                         double constant = 1.0);

// g(lambda2) = log(1 + lambda2 + lambda2^2).
double g_lambda(double lambda2);

// C * max{log((1 + 1/lambda2) / eps) / g(lambda2), (32 + 10 lambda1 + lambda2) eps^(-1/J)}, ceiled.
long long suggested_outer_iterations(double epsilon, double lambda1, double lambda2, int J,
                                     double constant = 1.0);

// r = 8 sqrt((lambda2 + C) / lambda1 * max{log(1/eps), d}).
double sample_radius(double epsilon, double lambda1, double lambda2, int dim, double constant);

// ceil(128 [-log(delta / 2) + d log(1 + 16 r L0 / eps)] / eps^2).
std::uint64_t sample_size_for(double epsilon, double delta, double lambda1, double lambda2,
                              double lipschitz_value, int dim, double constant);

}  // namespace papal
