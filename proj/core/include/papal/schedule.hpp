#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace papal {

struct StepOverride {
  std::optional<double> mu;
  std::optional<double> tau;
  std::optional<double> eta;
  std::optional<double> log_gamma;
};

// Momentum mu_t, proximal steps tau_t (y-side) and eta_t (x-side), and weights
// gamma_t = mu^(-t), each overridable per iteration.
struct ScheduleParams {
  double mu = 0.0;
  double tau = 0.0;
  double eta = 0.0;
  std::map<int, StepOverride> overrides;

  double mu_at(int t) const;
  double tau_at(int t) const;
  double eta_at(int t) const;
  double log_gamma_at(int t) const;
};

// mu = (2 + l^2 - l sqrt(4 + l^2)) / 2, the root of mu^2 - (2 + l^2) mu + 1 = 0
// in (0, 1], and tau = eta = l mu / (1 - mu).
ScheduleParams default_schedule(double lambda2);

struct ScheduleViolation {
  int t = 0;
  std::string condition;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Checks for t = 1..T:
//   gamma_t mu_t = gamma_{t-1}
//   gamma_t tau_t <= gamma_{t-1} (tau_{t-1} + lambda2)
//   gamma_t eta_t <= gamma_{t-1} (eta_{t-1} + lambda2)
//   tau_t eta_{t-1} >= mu_t
//   mu_t <= 1
// with relative tolerance `rel_tol` (two of them hold with equality under the
// default schedule).
std::vector<ScheduleViolation> validate_schedule(const ScheduleParams& params, double lambda2,
                                                 int T, double rel_tol = 1e-12);

std::string describe(const ScheduleViolation& v);

}  // namespace papal
