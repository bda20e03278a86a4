#pragma once

#include <cstdint>
#include <functional>

namespace papal {

// Numerical check of the proximal Gibbs step on a compact interval: for
// p proportional to exp(-l / (lambda + tau) - tau l~ / (lambda + tau)) and any p',
//   F(p') - F(p) = (lambda + tau) KL(p' || p),
// where F(p') = E_p'[l] + lambda E_p'[log p'] + tau KL(p' || p~) and p~ ~ exp(-l~).
// Normalizing constants come from adaptive Gauss-Kronrod quadrature; the
// expectations use the trapezoid rule on `nodes` points, so the reported
// deviation is the O(h^2) quadrature error of that rule.
struct ProxCheckConfig {
  double lo = -2.0;
  double hi = 2.0;
  int nodes = 1024;
  int perturbations = 20;
  double max_amplitude = 0.5;  // p' ~ p exp(a sin(b x + c)), |a| <= max_amplitude
  double max_frequency = 2.0;
  std::uint64_t seed = 1;
};

struct Tilt {
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
};

using ScalarFn = std::function<double(double)>;

// |F(p') - F(p) - (lambda + tau) KL(p' || p)| for p' = p exp(tilt) / Z.
// A zero-amplitude tilt gives p' = p and a deviation of exactly 0.
double prox_deviation(const ScalarFn& l, const ScalarFn& l_tilde, double lambda, double tau,
                      const Tilt& tilt, const ProxCheckConfig& cfg);

// Max deviation over cfg.perturbations random tilts drawn from cfg.seed.
double prox_identity_check(const ScalarFn& l, const ScalarFn& l_tilde, double lambda, double tau,
                           const ProxCheckConfig& cfg = {});

}  // namespace papal
