#include "papal/schedule.hpp"

#include <cmath>
#include <sstream>

#include "papal/types.hpp"

namespace papal {

double ScheduleParams::mu_at(int t) const {
  const auto it = overrides.find(t);
  return it != overrides.end() && it->second.mu ? *it->second.mu : mu;
}

double ScheduleParams::tau_at(int t) const {
  const auto it = overrides.find(t);
  return it != overrides.end() && it->second.tau ? *it->second.tau : tau;
}

double ScheduleParams::eta_at(int t) const {
  const auto it = overrides.find(t);
  return it != overrides.end() && it->second.eta ? *it->second.eta : eta;
}

double ScheduleParams::log_gamma_at(int t) const {
  const auto it = overrides.find(t);
  if (it != overrides.end() && it->second.log_gamma) return *it->second.log_gamma;
  return -static_cast<double>(t) * std::log(mu);
}

ScheduleParams default_schedule(double lambda2) {
  if (!(lambda2 > 0.0) || !std::isfinite(lambda2)) throw InvalidArgument("lambda2 must be positive");
  const double l2 = lambda2 * lambda2;
  // Smaller root written as 1 / (larger root) to avoid cancellation.
  const double mu = 2.0 / (2.0 + l2 + lambda2 * std::sqrt(4.0 + l2));
  ScheduleParams p;
  p.mu = mu;
  p.tau = lambda2 * mu / (1.0 - mu);
  p.eta = p.tau;
  return p;
}

std::vector<ScheduleViolation> validate_schedule(const ScheduleParams& params, double lambda2,
                                                 int T, double rel_tol) {
  std::vector<ScheduleViolation> out;
  auto report = [&](int t, const char* cond, double lhs, double rhs) {
    out.push_back({t, cond, lhs, rhs});
  };
  for (int t = 1; t <= T; ++t) {
    const double mu = params.mu_at(t);
    const double tau = params.tau_at(t);
    const double eta = params.eta_at(t);
    const double tau_prev = params.tau_at(t - 1);
    const double eta_prev = params.eta_at(t - 1);
    // gamma_t / gamma_{t-1}; all products are compared after dividing by gamma_{t-1}.
    const double growth = std::exp(params.log_gamma_at(t) - params.log_gamma_at(t - 1));

    const double lhs1 = growth * mu;
    if (!(std::abs(lhs1 - 1.0) <= rel_tol)) report(t, "gamma_t*mu_t = gamma_{t-1}", lhs1, 1.0);

    const double lhs2 = growth * tau;
    const double rhs2 = tau_prev + lambda2;
    if (!(lhs2 <= rhs2 * (1.0 + rel_tol))) {
      report(t, "gamma_t*tau_t <= gamma_{t-1}*(tau_{t-1}+lambda2)", lhs2, rhs2);
    }

    const double lhs3 = growth * eta;
    const double rhs3 = eta_prev + lambda2;
    if (!(lhs3 <= rhs3 * (1.0 + rel_tol))) {
      report(t, "gamma_t*eta_t <= gamma_{t-1}*(eta_{t-1}+lambda2)", lhs3, rhs3);
    }

    const double lhs4 = tau * eta_prev;
    if (!(lhs4 >= mu * (1.0 - rel_tol))) report(t, "tau_t*eta_{t-1} >= mu_t", lhs4, mu);

    if (!(mu <= 1.0 + rel_tol)) report(t, "mu_t <= 1", mu, 1.0);
  }
  return out;
}

std::string describe(const ScheduleViolation& v) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << v.t << ": " << v.condition << " violated (lhs " << v.lhs << ", rhs " << v.rhs << ")";
  return os.str();
}

}  // namespace papal
