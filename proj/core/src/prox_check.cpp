#include "papal/prox_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "papal/rng.hpp"
#include "papal/types.hpp"

namespace papal {

namespace {

double log_normalizer(const ScalarFn& log_u, double lo, double hi) {
  const double z = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) { return std::exp(log_u(x)); }, lo, hi, 15, 1e-15);
  if (!(z > 0.0) || !std::isfinite(z)) throw NumericalError("prox check: degenerate normalizer");
  return std::log(z);
}

}  // namespace

double prox_deviation(const ScalarFn& l, const ScalarFn& l_tilde, double lambda, double tau,
                      const Tilt& tilt, const ProxCheckConfig& cfg) {
  if (!(lambda > 0.0) || !(tau >= 0.0)) throw InvalidArgument("prox check needs lambda > 0, tau >= 0");
  if (cfg.nodes < 2 || !(cfg.hi > cfg.lo)) throw InvalidArgument("prox check: bad grid");
  const double s = lambda + tau;
  const ScalarFn log_p_u = [&](double x) { return -l(x) / s - tau * l_tilde(x) / s; };
  const ScalarFn log_pt_u = [&](double x) { return -l_tilde(x); };
  const double log_zp = log_normalizer(log_p_u, cfg.lo, cfg.hi);
  const double log_zt = log_normalizer(log_pt_u, cfg.lo, cfg.hi);
  const bool identity = tilt.amplitude == 0.0;
  const auto bump = [&](double x) { return tilt.amplitude * std::sin(tilt.frequency * x + tilt.phase); };
  const double log_zq =
      identity ? 0.0
               : log_normalizer([&](double x) { return log_p_u(x) - log_zp + bump(x); }, cfg.lo, cfg.hi);

  const int n = cfg.nodes;
  const double h = (cfg.hi - cfg.lo) / (n - 1);
  // Trapezoid sums of F(p'), F(p) and KL(p' || p).
  double f_p = 0.0, f_q = 0.0, kl = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = cfg.lo + i * h;
    const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    const double log_p = log_p_u(x) - log_zp;
    const double log_pt = log_pt_u(x) - log_zt;
    const double log_q = identity ? log_p : log_p + bump(x) - log_zq;
    const double p = std::exp(log_p);
    const double q = std::exp(log_q);
    const double lx = l(x);
    f_p += w * p * (lx + lambda * log_p + tau * (log_p - log_pt));
    f_q += w * q * (lx + lambda * log_q + tau * (log_q - log_pt));
    kl += w * q * (log_q - log_p);
  }
  return std::abs(f_q - f_p - s * kl);
}

double prox_identity_check(const ScalarFn& l, const ScalarFn& l_tilde, double lambda, double tau,
                           const ProxCheckConfig& cfg) {
  ParticleRng rng(StreamKey{cfg.seed, 0, StreamTag::kUser}.stream(0));
  double worst = 0.0;
  for (int k = 0; k < cfg.perturbations; ++k) {
    Tilt t;
    t.amplitude = cfg.max_amplitude * (2.0 * rng.uniform() - 1.0);
    t.frequency = cfg.max_frequency * rng.uniform();
    t.phase = 2.0 * M_PI * rng.uniform();
    worst = std::max(worst, prox_deviation(l, l_tilde, lambda, tau, t, cfg));
  }
  return worst;
}

}  // namespace papal
