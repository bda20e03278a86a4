#include "papal/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace papal {

namespace {

std::vector<ParticleRng> particle_streams(const StreamKey& key, Eigen::Index count) {
  std::vector<ParticleRng> rngs;
  rngs.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index r = 0; r < count; ++r) rngs.emplace_back(key.stream(static_cast<std::uint64_t>(r)));
  return rngs;
}

void check_init(const GibbsTarget& target, const ParticleEnsemble& init) {
  if (init.dim() != target.dim()) throw DimensionMismatch("ensemble dimension does not match the target");
  if (init.count() < 1) throw InvalidArgument("empty ensemble");
}

void require_finite_rows(const Matrix& m, int step, const char* what) {
  if (m.allFinite()) return;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (!m.row(r).allFinite()) {
      std::ostringstream os;
      os << "non-finite " << what << " at particle " << r << ", step " << step;
      throw NumericalError(os.str());
    }
  }
}

void langevin_move(Matrix& pos, const Matrix& grads, double step, std::vector<ParticleRng>& rngs) {
  const double noise = std::sqrt(2.0 * step);
  for (Eigen::Index r = 0; r < pos.rows(); ++r) {
    ParticleRng& rng = rngs[static_cast<std::size_t>(r)];
    for (Eigen::Index i = 0; i < pos.cols(); ++i) {
      pos(r, i) += -step * grads(r, i) + noise * rng.normal();
    }
  }
}

void mala_steps(const GibbsTarget& target, Matrix& pos, double step, int iterations,
                std::vector<ParticleRng>& rngs, ChainStats& stats) {
  Vector v, vp;
  Matrix g, gp;
  target.evaluate(pos, &v, &g);
  require_finite_rows(g, 0, "gradient");
  const double noise = std::sqrt(2.0 * step);
  Matrix prop(pos.rows(), pos.cols());
  for (int k = 0; k < iterations; ++k) {
    for (Eigen::Index r = 0; r < pos.rows(); ++r) {
      ParticleRng& rng = rngs[static_cast<std::size_t>(r)];
      for (Eigen::Index i = 0; i < pos.cols(); ++i) {
        prop(r, i) = pos(r, i) - step * g(r, i) + noise * rng.normal();
      }
    }
    require_finite_rows(prop, k, "proposal");
    target.evaluate(prop, &vp, &gp);
    for (Eigen::Index r = 0; r < pos.rows(); ++r) {
      const double la = mala_log_acceptance(v[r], row_view(g, r), row_view(pos, r), vp[r],
                                            row_view(gp, r), row_view(prop, r), step);
      const double u = rngs[static_cast<std::size_t>(r)].uniform();
      ++stats.proposals;
      if (std::isfinite(vp[r]) && gp.row(r).allFinite() && std::log(u) < la) {
        ++stats.accepted;
        pos.row(r) = prop.row(r);
        v[r] = vp[r];
        g.row(r) = gp.row(r);
      }
    }
  }
}

// exp{-V(theta) - |theta - anchor_r|^2 / (2 eta)} for row r.
class AnchoredTarget final : public GibbsTarget {
 public:
  AnchoredTarget(const GibbsTarget& base, const Matrix& anchors, double eta)
      : base_(base), anchors_(anchors), eta_(eta) {}
  int dim() const override { return base_.dim(); }
  void evaluate(const Matrix& points, Vector* values, Matrix* grads) const override {
    base_.evaluate(points, values, grads);
    const Matrix diff = points - anchors_;
    if (values) *values += diff.rowwise().squaredNorm() / (2.0 * eta_);
    if (grads) *grads += diff / eta_;
  }

 private:
  const GibbsTarget& base_;
  const Matrix& anchors_;
  double eta_;
};

Eigen::Index snapshot_count(const PotentialEvaluator& ev) {
  Eigen::Index m = 0;
  for (const auto& g : ev.generic_groups()) m = std::max(m, g.snapshot->count());
  return m;
}

// First `take` entries of a uniformly random permutation of 0..n-1, sorted.
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t take,
                                                  CounterStream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

SamplerKind parse_sampler_kind(const std::string& name) {
  if (name == "ula") return SamplerKind::kUla;
  if (name == "mala") return SamplerKind::kMala;
  if (name == "proximal") return SamplerKind::kProximal;
  if (name == "sgld") return SamplerKind::kSgld;
  throw InvalidArgument("unknown sampler '" + name + "' (expected ula, mala, proximal or sgld)");
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kUla: return "ula";
    case SamplerKind::kMala: return "mala";
    case SamplerKind::kProximal: return "proximal";
    case SamplerKind::kSgld: return "sgld";
  }
  return "?";
}

void InnerSamplerConfig::validate() const {
  if (!(step >= 0.0) || !std::isfinite(step)) throw InvalidArgument("sampler step must be >= 0");
  if (iterations < 0) throw InvalidArgument("sampler iterations must be >= 0");
  if (kind == SamplerKind::kMala || kind == SamplerKind::kProximal) {
    if (!(step > 0.0)) throw InvalidArgument("MALA and proximal samplers need a positive step");
  }
  if (kind == SamplerKind::kProximal && inner_iterations < 1) {
    throw InvalidArgument("proximal sampler needs an inner MALA budget >= 1");
  }
  if (kind == SamplerKind::kSgld && (particle_batch < 1 || noise_batch < 1)) {
    throw InvalidArgument("SGLD batch sizes must be >= 1");
  }
}

void QuadraticTarget::evaluate(const Matrix& points, Vector* values, Matrix* grads) const {
  if (values) *values = 0.5 * a_ * points.rowwise().squaredNorm();
  if (grads) *grads = a_ * points;
}

double mala_log_acceptance(double v_theta, Point grad_theta, Point theta, double v_prop,
                           Point grad_prop, Point prop, double step) {
  double back = 0.0;
  double fwd = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double b = theta[i] - prop[i] + step * grad_prop[i];
    const double f = prop[i] - theta[i] + step * grad_theta[i];
    back += b * b;
    fwd += f * f;
  }
  const double la = -v_prop + v_theta - back / (4.0 * step) + fwd / (4.0 * step);
  return std::min(0.0, la);
}

ChainResult ula_chain(const GibbsTarget& target, ParticleEnsemble init, const UlaConfig& cfg,
                      const StreamKey& key) {
  check_init(target, init);
  if (!(cfg.step >= 0.0) || cfg.iterations < 0) throw InvalidArgument("invalid ULA config");
  auto rngs = particle_streams(key, init.count());
  Matrix grads;
  for (int k = 0; k < cfg.iterations; ++k) {
    target.evaluate(init.positions, nullptr, &grads);
    require_finite_rows(grads, k, "gradient");
    langevin_move(init.positions, grads, cfg.step, rngs);
  }
  require_finite_rows(init.positions, cfg.iterations, "position");
  return {std::move(init), {}};
}

ChainResult mala_chain(const GibbsTarget& target, ParticleEnsemble init, const MalaConfig& cfg,
                       const StreamKey& key) {
  check_init(target, init);
  if (!(cfg.step > 0.0) || cfg.iterations < 0) throw InvalidArgument("invalid MALA config");
  auto rngs = particle_streams(key, init.count());
  ChainStats stats;
  mala_steps(target, init.positions, cfg.step, cfg.iterations, rngs, stats);
  return {std::move(init), stats};
}

ChainResult proximal_sampler_chain(const GibbsTarget& target, ParticleEnsemble init,
                                   const ProximalConfig& cfg, const StreamKey& key) {
  check_init(target, init);
  if (cfg.inner_iterations < 1) {
    throw InvalidArgument("proximal sampler needs an inner MALA budget >= 1");
  }
  if (!(cfg.step > 0.0) || cfg.outer_steps < 0) throw InvalidArgument("invalid proximal config");
  const double inner_step = cfg.inner_step > 0.0 ? cfg.inner_step : cfg.step / 4.0;
  auto rngs = particle_streams(key, init.count());
  ChainStats stats;
  Matrix anchors(init.count(), init.dim());
  const double sd = std::sqrt(cfg.step);
  for (int k = 0; k < cfg.outer_steps; ++k) {
    for (Eigen::Index r = 0; r < anchors.rows(); ++r) {
      ParticleRng& rng = rngs[static_cast<std::size_t>(r)];
      for (Eigen::Index i = 0; i < anchors.cols(); ++i) {
        anchors(r, i) = init.positions(r, i) + sd * rng.normal();
      }
    }
    const AnchoredTarget restricted(target, anchors, cfg.step);
    mala_steps(restricted, init.positions, inner_step, cfg.inner_iterations, rngs, stats);
  }
  return {std::move(init), stats};
}

SubsampledGradient::SubsampledGradient(const FlattenedPotential& pot, Eigen::Index particle_batch,
                                       std::size_t noise_batch, const TruncationPolicy& policy)
    : groups_(pot.evaluator(policy, false)),
      dim_(pot.dim()),
      particle_batch_(particle_batch),
      noise_batch_(noise_batch) {
  if (particle_batch < 1 || noise_batch < 1) throw InvalidArgument("SGLD batch sizes must be >= 1");
  for (const auto& g : groups_.generic_groups()) {
    if (particle_batch > g.snapshot->count()) {
      throw InvalidArgument("SGLD particle batch exceeds the snapshot size");
    }
    if (g.noise_source && noise_batch > g.noise_draws.size()) {
      throw InvalidArgument("SGLD noise batch exceeds the number of noise draws");
    }
  }
}

void SubsampledGradient::gradient(Point z, CounterStream& rng, MutPoint out) const {
  const double q2 = 2.0 * groups_.quad_coeff();
  for (int i = 0; i < dim_; ++i) out[i] = q2 * z[i];
  Matrix query(1, dim_);
  std::copy(z.begin(), z.end(), query.data());
  Vector v;
  Matrix g;
  Matrix atoms;
  for (const auto& group : groups_.generic_groups()) {
    const Matrix& all = group.snapshot->positions;
    const Matrix* used = &all;
    if (particle_batch_ < all.rows()) {
      const auto idx = draw_without_replacement(static_cast<std::size_t>(all.rows()),
                                                static_cast<std::size_t>(particle_batch_), rng);
      atoms.resize(particle_batch_, all.cols());
      for (std::size_t j = 0; j < idx.size(); ++j) {
        atoms.row(static_cast<Eigen::Index>(j)) = all.row(static_cast<Eigen::Index>(idx[j]));
      }
      used = &atoms;
    }
    PayoffPtr oracle = group.oracle;
    if (group.noise_source && noise_batch_ < group.noise_draws.size()) {
      const auto idx = draw_without_replacement(group.noise_draws.size(), noise_batch_, rng);
      std::vector<double> draws;
      draws.reserve(idx.size());
      for (std::size_t j : idx) draws.push_back(group.noise_draws[j]);
      oracle = group.noise_source->average_over(draws);
    }
    oracle->average_against(opponent(groups_.side()), *used, query, v, g);
    for (int i = 0; i < dim_; ++i) out[i] += group.coeff * g(0, i);
  }
}

ChainResult sgld_chain(const FlattenedPotential& pot, ParticleEnsemble init, const SgldConfig& cfg,
                       const StreamKey& key, const StreamKey& subsample_key,
                       const TruncationPolicy& policy) {
  if (cfg.particle_batch < 1 || cfg.noise_batch < 1) {
    throw InvalidArgument("SGLD batch sizes must be >= 1");
  }
  const SubsampledGradient estimator(pot, cfg.particle_batch, cfg.noise_batch, policy);
  const PotentialEvaluator groups = pot.evaluator(policy, false);
  bool full = cfg.particle_batch >= snapshot_count(groups);
  for (const auto& g : groups.generic_groups()) {
    if (g.noise_source && cfg.noise_batch < g.noise_draws.size()) full = false;
  }
  if (full) return ula_chain(pot.evaluator(policy), std::move(init), {cfg.step, cfg.iterations}, key);

  if (init.dim() != pot.dim()) throw DimensionMismatch("ensemble dimension does not match the target");
  auto rngs = particle_streams(key, init.count());
  std::vector<CounterStream> sub;
  sub.reserve(static_cast<std::size_t>(init.count()));
  for (Eigen::Index r = 0; r < init.count(); ++r) {
    sub.push_back(subsample_key.stream(static_cast<std::uint64_t>(r)));
  }
  Matrix grads(init.count(), init.dim());
  for (int k = 0; k < cfg.iterations; ++k) {
    for (Eigen::Index r = 0; r < init.count(); ++r) {
      estimator.gradient(row_view(init.positions, r), sub[static_cast<std::size_t>(r)],
                         row_view(grads, r));
    }
    require_finite_rows(grads, k, "gradient");
    langevin_move(init.positions, grads, cfg.step, rngs);
  }
  return {std::move(init), {}};
}

ChainResult run_inner_sampler(const FlattenedPotential& pot, ParticleEnsemble init,
                              const InnerSamplerConfig& cfg, const StreamKey& key,
                              const StreamKey& subsample_key, const TruncationPolicy& policy) {
  cfg.validate();
  switch (cfg.kind) {
    case SamplerKind::kUla:
      return ula_chain(pot.evaluator(policy), std::move(init), cfg.ula(), key);
    case SamplerKind::kMala:
      return mala_chain(pot.evaluator(policy), std::move(init), cfg.mala(), key);
    case SamplerKind::kProximal:
      return proximal_sampler_chain(pot.evaluator(policy), std::move(init), cfg.proximal(), key);
    case SamplerKind::kSgld:
      return sgld_chain(pot, std::move(init), cfg.sgld(), key, subsample_key, policy);
  }
  throw InvalidArgument("unknown sampler kind");
}

}  // namespace papal
