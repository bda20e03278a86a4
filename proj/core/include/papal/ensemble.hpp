#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "papal/payoff.hpp"
#include "papal/rng.hpp"
#include "papal/types.hpp"

namespace papal {

// M particles in one player's space, one per row.
struct ParticleEnsemble {
  Matrix positions;
  std::uint64_t generation = 0;

  int dim() const { return static_cast<int>(positions.cols()); }
  Eigen::Index count() const { return positions.rows(); }
  bool all_finite() const { return positions.allFinite(); }
};

// Frozen copy of an ensemble. Potential terms hold these, so they must never
// be mutated after creation.
using EnsembleSnapshot = std::shared_ptr<const ParticleEnsemble>;

EnsembleSnapshot freeze(const ParticleEnsemble& ensemble);
EnsembleSnapshot freeze(ParticleEnsemble&& ensemble);

// i.i.d. draws from the prior with density proportional to
// exp(-(lambda1 / lambda2) |x|^2), i.e. per-coordinate variance lambda2 / (2 lambda1).
// Particle r uses key.stream(r).
ParticleEnsemble sample_prior(int dim, Eigen::Index count, double lambda1, double lambda2,
                              const StreamKey& key);

struct PayoffAverage {
  double value = 0.0;
  Vector grad;
};

// Mean over the snapshot particles of f with the snapshot in the argument slot
// of `atoms_player` and `point` in the other one, plus the mean gradient with
// respect to `point`.
PayoffAverage empirical_payoff_grad(const ParticleEnsemble& atoms, const PayoffOracle& oracle,
                                    Point point, Player atoms_player);

// CSV: header "generation=<g>", then one comma-separated row per particle.
void write_csv(const ParticleEnsemble& ensemble, std::ostream& out);
ParticleEnsemble read_csv(std::istream& in);

// Little-endian binary: magic, generation, rows, cols, row-major doubles.
void write_binary(const ParticleEnsemble& ensemble, std::ostream& out);
ParticleEnsemble read_binary(std::istream& in);

void save_ensemble(const ParticleEnsemble& ensemble, const std::string& path);
ParticleEnsemble load_ensemble(const std::string& path);

}  // namespace papal
