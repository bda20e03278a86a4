#pragma once

#include <memory>
#include <string>
#include <vector>

#include "papal/ensemble.hpp"
#include "papal/payoff.hpp"

namespace papal {

enum class TermKind { kPhi, kPsi };

// A payoff average against one frozen snapshot, weighted by `coeff`.
struct TermComponent {
  EnsembleSnapshot snapshot;
  double coeff = 0.0;
};

// One particle-averaged payoff term of a potential.
//   phi (y-side): -(1 + mu) E_prev f(., y) + mu E_prev2 f(., y)
//   psi (x-side): E_snap f(x, .)
class PotentialTerm {
 public:
  TermKind kind() const { return kind_; }
  // Side of the potential the term belongs to (kMax for phi, kMin for psi).
  Player side() const { return kind_ == TermKind::kPhi ? Player::kMax : Player::kMin; }
  Player atoms_player() const { return opponent(side()); }
  double momentum() const { return momentum_; }
  const PayoffPtr& oracle() const { return oracle_; }
  const std::vector<TermComponent>& components() const { return components_; }

  // sum |coeff| * sup|f|: 1 + 2 mu for phi, 1 for psi.
  double sup_bound() const;

  // Present when the oracle is separable: the term equals
  // sum_k coeffs[k] w_k(z) with w the features of side().
  const SeparableBasis* basis() const { return basis_; }
  const Vector& separable_coeffs() const { return coeffs_; }

  // Noise draws the oracle was averaged over (stochastic runs only).
  const StochasticPayoffPtr& noise_source() const { return noise_source_; }
  const std::vector<double>& noise_draws() const { return noise_draws_; }
  void attach_noise(StochasticPayoffPtr source, std::vector<double> draws);

  double value(Point z) const;
  double value_and_grad(Point z, MutPoint grad) const;

  std::string describe() const;

 private:
  friend PotentialTerm make_phi_term(EnsembleSnapshot, EnsembleSnapshot, double, PayoffPtr);
  friend PotentialTerm make_psi_term(EnsembleSnapshot, PayoffPtr);
  void cache_features();

  TermKind kind_ = TermKind::kPsi;
  double momentum_ = 0.0;
  PayoffPtr oracle_;
  std::vector<TermComponent> components_;
  const SeparableBasis* basis_ = nullptr;
  Vector coeffs_;
  StochasticPayoffPtr noise_source_;
  std::vector<double> noise_draws_;
};

using TermPtr = std::shared_ptr<const PotentialTerm>;

// prev2 may alias prev (the duplicated initial snapshot); mu = 0 keeps the
// two-snapshot form with a zero coefficient on prev2.
PotentialTerm make_phi_term(EnsembleSnapshot prev, EnsembleSnapshot prev2, double momentum,
                            PayoffPtr oracle);
PotentialTerm make_psi_term(EnsembleSnapshot snapshot, PayoffPtr oracle);

struct TruncationPolicy {
  bool enabled = false;
  // Terms with weight * sup_bound below the floor are dropped (newest never).
  double weight_floor = 0.0;

  static TruncationPolicy off() { return {}; }
  static TruncationPolicy default_for(double lambda2) { return {true, 1e-8 / lambda2}; }
};

struct PotentialValue {
  double value = 0.0;
  Vector grad;
  double truncation_bound = 0.0;
};

// Target density exp(-V) for the inner samplers, evaluated on a batch of
// points (one per row).
class GibbsTarget {
 public:
  virtual ~GibbsTarget() = default;
  virtual int dim() const = 0;
  // Either output may be null.
  virtual void evaluate(const Matrix& points, Vector* values, Matrix* grads) const = 0;
};

class PotentialEvaluator;

struct WeightedTerm {
  double weight = 0.0;
  TermPtr term;
};

struct PotentialDump {
  double quad_coeff = 0.0;
  std::vector<double> weights;
  std::vector<std::string> terms;  // "phi[g_prev,g_prev2]" or "psi[g]"
};

// V(z) = quad_coeff |z|^2 + sum_s w_s term_s(z), the unrolled recursion
// h_t = (phi_t + lambda1 |y|^2 + tau_t h_{t-1}) / (lambda2 + tau_t) and its
// x-side analogue. Immutable; extended() returns a new potential sharing terms.
class FlattenedPotential {
 public:
  static FlattenedPotential prior(Player side, int dim, double lambda1, double lambda2);

  FlattenedPotential extended(PotentialTerm term, double step) const;
  FlattenedPotential extended(TermPtr term, double step) const;

  Player side() const { return side_; }
  int dim() const { return dim_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double quad_coeff() const { return quad_coeff_; }
  const std::vector<WeightedTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  std::vector<double> weights() const;

  // sum_s w_s sup|term_s|; at most 3 / lambda2 (y-side) or 1 / lambda2 (x-side)
  // under an admissible schedule.
  double sup_bound() const;

  PotentialValue eval_and_grad(Point z, const TruncationPolicy& policy = {}) const;
  double value(Point z) const;

  // collapse_separable = false keeps every term as a per-snapshot group
  // (needed when the snapshots themselves are subsampled).
  PotentialEvaluator evaluator(const TruncationPolicy& policy = {},
                               bool collapse_separable = true) const;

  PotentialDump dump() const;

 private:
  Player side_ = Player::kMax;
  int dim_ = 0;
  double lambda1_ = 0.0;
  double lambda2_ = 0.0;
  double quad_coeff_ = 0.0;
  std::vector<WeightedTerm> terms_;
};

// Batched evaluation of a potential. Separable terms sharing a basis collapse
// into one coefficient vector; the remaining terms are grouped per
// (snapshot, oracle) so each snapshot is visited once per evaluation.
class PotentialEvaluator final : public GibbsTarget {
 public:
  PotentialEvaluator(const FlattenedPotential& potential, const TruncationPolicy& policy,
                     bool collapse_separable = true);

  int dim() const override { return dim_; }
  void evaluate(const Matrix& points, Vector* values, Matrix* grads) const override;

  double truncation_bound() const { return truncation_bound_; }
  std::size_t retained_terms() const { return retained_; }

  struct SeparableGroup {
    const SeparableBasis* basis = nullptr;
    PayoffPtr keepalive;
    Vector coeffs;
  };
  struct GenericGroup {
    EnsembleSnapshot snapshot;
    PayoffPtr oracle;
    double coeff = 0.0;
    // Stochastic source for noise subsampling (may be null).
    StochasticPayoffPtr noise_source;
    std::vector<double> noise_draws;
  };

  Player side() const { return side_; }
  double quad_coeff() const { return quad_coeff_; }
  const std::vector<SeparableGroup>& separable_groups() const { return separable_; }
  const std::vector<GenericGroup>& generic_groups() const { return generic_; }

 private:
  Player side_;
  int dim_;
  double quad_coeff_;
  double truncation_bound_ = 0.0;
  std::size_t retained_ = 0;
  std::vector<SeparableGroup> separable_;
  std::vector<GenericGroup> generic_;
};

}  // namespace papal
