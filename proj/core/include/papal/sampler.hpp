#pragma once

#include <cstdint>
#include <string>

#include "papal/ensemble.hpp"
#include "papal/potential.hpp"
#include "papal/rng.hpp"

namespace papal {

struct UlaConfig {
  double step = 0.05;
  int iterations = 300;
};

struct MalaConfig {
  double step = 0.05;
  int iterations = 300;
};

struct ProximalConfig {
  double step = 0.1;        // eta of the Gaussian forward step
  int outer_steps = 50;
  int inner_iterations = 10;
  double inner_step = 0.0;  // MALA step on the restricted target; 0: step / 4
};

struct SgldConfig {
  double step = 0.05;
  int iterations = 300;
  Eigen::Index particle_batch = 32;  // >= snapshot size: full snapshots
  std::size_t noise_batch = 1;       // >= draw count: all noise draws
};

enum class SamplerKind { kUla, kMala, kProximal, kSgld };

SamplerKind parse_sampler_kind(const std::string& name);
std::string to_string(SamplerKind kind);

// Union of the per-sampler settings; the solver picks the relevant fields.
struct InnerSamplerConfig {
  SamplerKind kind = SamplerKind::kUla;
  double step = 0.05;
  int iterations = 300;
  int inner_iterations = 10;
  double inner_step = 0.0;
  Eigen::Index particle_batch = 32;
  std::size_t noise_batch = 1;

  UlaConfig ula() const { return {step, iterations}; }
  MalaConfig mala() const { return {step, iterations}; }
  ProximalConfig proximal() const { return {step, iterations, inner_iterations, inner_step}; }
  SgldConfig sgld() const { return {step, iterations, particle_batch, noise_batch}; }
  void validate() const;
};

struct ChainStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double accept_rate() const {
    return proposals == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

struct ChainResult {
  ParticleEnsemble ensemble;
  ChainStats stats;
};

// V(z) = (a / 2) |z|^2.
class QuadraticTarget final : public GibbsTarget {
 public:
  QuadraticTarget(int dim, double a) : dim_(dim), a_(a) {}
  int dim() const override { return dim_; }
  void evaluate(const Matrix& points, Vector* values, Matrix* grads) const override;

 private:
  int dim_;
  double a_;
};

// Noise for particle r comes from key.stream(r); the same key reproduces the
// chain regardless of how particles are batched.
ChainResult ula_chain(const GibbsTarget& target, ParticleEnsemble init, const UlaConfig& cfg,
                      const StreamKey& key);

ChainResult mala_chain(const GibbsTarget& target, ParticleEnsemble init, const MalaConfig& cfg,
                       const StreamKey& key);

ChainResult proximal_sampler_chain(const GibbsTarget& target, ParticleEnsemble init,
                                   const ProximalConfig& cfg, const StreamKey& key);

// ULA with the payoff part of the gradient replaced by an average over
// particle_batch snapshot particles (and noise_batch draws in stochastic runs)
// drawn without replacement per particle and step. Full batches reduce to
// ula_chain on pot.evaluator(policy) bit for bit.
ChainResult sgld_chain(const FlattenedPotential& pot, ParticleEnsemble init, const SgldConfig& cfg,
                       const StreamKey& key, const StreamKey& subsample_key,
                       const TruncationPolicy& policy = {});

// Runs the configured sampler on exp(-pot).
ChainResult run_inner_sampler(const FlattenedPotential& pot, ParticleEnsemble init,
                              const InnerSamplerConfig& cfg, const StreamKey& key,
                              const StreamKey& subsample_key, const TruncationPolicy& policy = {});

// log of min{1, pi(y) Q(y, theta) / (pi(theta) Q(theta, y))} for the Langevin
// proposal Q(theta, .) = N(theta - step grad V(theta), 2 step I).
double mala_log_acceptance(double v_theta, Point grad_theta, Point theta, double v_prop,
                           Point grad_prop, Point prop, double step);

// Unbiased minibatch estimate of grad V used by sgld_chain.
class SubsampledGradient {
 public:
  SubsampledGradient(const FlattenedPotential& pot, Eigen::Index particle_batch,
                     std::size_t noise_batch, const TruncationPolicy& policy = {});

  int dim() const { return dim_; }
  void gradient(Point z, CounterStream& rng, MutPoint out) const;

 private:
  PotentialEvaluator groups_;
  int dim_;
  Eigen::Index particle_batch_;
  std::size_t noise_batch_;
};

}  // namespace papal
