#include "papal/potential.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "papal/summation.hpp"

namespace papal {

double PotentialTerm::sup_bound() const {
  double total = 0.0;
  for (const auto& c : components_) total += std::abs(c.coeff);
  return total * oracle_->sup_abs();
}

void PotentialTerm::attach_noise(StochasticPayoffPtr source, std::vector<double> draws) {
  noise_source_ = std::move(source);
  noise_draws_ = std::move(draws);
}

void PotentialTerm::cache_features() {
  const auto view = oracle_->separable();
  if (!view) return;
  basis_ = view->basis;
  const int rank = basis_->rank();
  coeffs_ = Vector::Zero(rank);
  Matrix features;
  for (const auto& c : components_) {
    if (c.coeff == 0.0) continue;
    const Matrix& atoms = c.snapshot->positions;
    features.resize(atoms.rows(), rank);
    for (Eigen::Index r = 0; r < atoms.rows(); ++r) {
      basis_->features(atoms_player(), row_view(atoms, r), row_view(features, r));
    }
    coeffs_ += c.coeff * pairwise_column_mean(features);
  }
  coeffs_ *= view->scale;
}

double PotentialTerm::value_and_grad(Point z, MutPoint grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  if (basis_) return basis_->contract(side(), as_point(coeffs_), z, grad);
  double value = 0.0;
  for (const auto& c : components_) {
    if (c.coeff == 0.0) continue;
    const PayoffAverage avg = empirical_payoff_grad(*c.snapshot, *oracle_, z, atoms_player());
    value += c.coeff * avg.value;
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += c.coeff * avg.grad[static_cast<Eigen::Index>(i)];
  }
  return value;
}

double PotentialTerm::value(Point z) const {
  std::vector<double> grad(z.size());
  return value_and_grad(z, grad);
}

std::string PotentialTerm::describe() const {
  std::ostringstream os;
  os << (kind_ == TermKind::kPhi ? "phi[" : "psi[");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) os << ',';
    os << components_[i].snapshot->generation;
  }
  os << ']';
  return os.str();
}

PotentialTerm make_phi_term(EnsembleSnapshot prev, EnsembleSnapshot prev2, double momentum,
                            PayoffPtr oracle) {
  if (!prev || !prev2 || !oracle) throw InvalidArgument("phi term needs two snapshots and a payoff");
  if (!(momentum >= 0.0) || !std::isfinite(momentum)) {
    throw InvalidArgument("momentum must be finite and non-negative");
  }
  if (prev->dim() != oracle->dim_x() || prev2->dim() != oracle->dim_x()) {
    throw DimensionMismatch("phi term snapshots must live in the x space");
  }
  PotentialTerm term;
  term.kind_ = TermKind::kPhi;
  term.momentum_ = momentum;
  term.oracle_ = std::move(oracle);
  if (prev == prev2) {
    term.components_ = {{prev, -1.0}};
  } else {
    term.components_ = {{prev, -(1.0 + momentum)}, {prev2, momentum}};
  }
  term.cache_features();
  return term;
}

PotentialTerm make_psi_term(EnsembleSnapshot snapshot, PayoffPtr oracle) {
  if (!snapshot || !oracle) throw InvalidArgument("psi term needs a snapshot and a payoff");
  if (snapshot->dim() != oracle->dim_y()) {
    throw DimensionMismatch("psi term snapshot must live in the y space");
  }
  PotentialTerm term;
  term.kind_ = TermKind::kPsi;
  term.oracle_ = std::move(oracle);
  term.components_ = {{std::move(snapshot), 1.0}};
  term.cache_features();
  return term;
}

FlattenedPotential FlattenedPotential::prior(Player side, int dim, double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw InvalidArgument("lambda1 and lambda2 must be positive");
  }
  if (dim < 1) throw InvalidArgument("potential dimension must be >= 1");
  FlattenedPotential pot;
  pot.side_ = side;
  pot.dim_ = dim;
  pot.lambda1_ = lambda1;
  pot.lambda2_ = lambda2;
  pot.quad_coeff_ = lambda1 / lambda2;
  return pot;
}

FlattenedPotential FlattenedPotential::extended(PotentialTerm term, double step) const {
  return extended(std::make_shared<const PotentialTerm>(std::move(term)), step);
}

FlattenedPotential FlattenedPotential::extended(TermPtr term, double step) const {
  if (!term) throw InvalidArgument("null potential term");
  if (term->side() != side_) {
    throw InvalidArgument(std::string("term belongs to the ") + to_string(term->side()) +
                          "-side, potential is " + to_string(side_) + "-side");
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("step must be positive");
  const double denom = lambda2_ + step;
  const double keep = step / denom;
  FlattenedPotential out = *this;
  for (auto& wt : out.terms_) wt.weight *= keep;
  out.terms_.push_back({1.0 / denom, std::move(term)});
  out.quad_coeff_ = lambda1_ / denom + keep * quad_coeff_;
  const double target = lambda1_ / lambda2_;
  if (std::abs(out.quad_coeff_ - target) > 1e-12 * std::max(1.0, target)) {
    throw NumericalError("quadratic coefficient drifted from lambda1 / lambda2");
  }
  return out;
}

std::vector<double> FlattenedPotential::weights() const {
  std::vector<double> w;
  w.reserve(terms_.size());
  for (const auto& t : terms_) w.push_back(t.weight);
  return w;
}

double FlattenedPotential::sup_bound() const {
  double total = 0.0;
  for (const auto& t : terms_) total += t.weight * t.term->sup_bound();
  return total;
}

namespace {

bool dropped(const WeightedTerm& wt, bool newest, const TruncationPolicy& policy) {
  return policy.enabled && !newest && wt.weight * wt.term->sup_bound() < policy.weight_floor;
}

}  // namespace

PotentialValue FlattenedPotential::eval_and_grad(Point z, const TruncationPolicy& policy) const {
  if (static_cast<int>(z.size()) != dim_) throw DimensionMismatch("potential: point dimension");
  PotentialValue out;
  out.grad.resize(dim_);
  double norm2 = 0.0;
  for (int i = 0; i < dim_; ++i) {
    norm2 += z[i] * z[i];
    out.grad[i] = 2.0 * quad_coeff_ * z[i];
  }
  out.value = quad_coeff_ * norm2;
  Vector g(dim_);
  for (std::size_t s = 0; s < terms_.size(); ++s) {
    const auto& wt = terms_[s];
    if (dropped(wt, s + 1 == terms_.size(), policy)) {
      out.truncation_bound += wt.weight * wt.term->sup_bound();
      continue;
    }
    if (wt.weight == 0.0) continue;
    out.value += wt.weight * wt.term->value_and_grad(z, as_point(g));
    out.grad += wt.weight * g;
  }
  return out;
}

double FlattenedPotential::value(Point z) const { return eval_and_grad(z).value; }

PotentialEvaluator FlattenedPotential::evaluator(const TruncationPolicy& policy,
                                                 bool collapse_separable) const {
  return PotentialEvaluator(*this, policy, collapse_separable);
}

PotentialDump FlattenedPotential::dump() const {
  PotentialDump d;
  d.quad_coeff = quad_coeff_;
  for (const auto& t : terms_) {
    d.weights.push_back(t.weight);
    d.terms.push_back(t.term->describe());
  }
  return d;
}

PotentialEvaluator::PotentialEvaluator(const FlattenedPotential& potential,
                                       const TruncationPolicy& policy, bool collapse_separable)
    : side_(potential.side()), dim_(potential.dim()), quad_coeff_(potential.quad_coeff()) {
  std::map<const SeparableBasis*, std::size_t> sep_index;
  std::map<std::pair<const ParticleEnsemble*, const PayoffOracle*>, std::size_t> gen_index;
  const auto& terms = potential.terms();
  for (std::size_t s = 0; s < terms.size(); ++s) {
    const auto& wt = terms[s];
    if (dropped(wt, s + 1 == terms.size(), policy)) {
      truncation_bound_ += wt.weight * wt.term->sup_bound();
      continue;
    }
    if (wt.weight == 0.0) continue;
    ++retained_;
    const PotentialTerm& term = *wt.term;
    if (collapse_separable && term.basis()) {
      auto [it, fresh] = sep_index.emplace(term.basis(), separable_.size());
      if (fresh) {
        separable_.push_back({term.basis(), term.oracle(), Vector::Zero(term.separable_coeffs().size())});
      }
      separable_[it->second].coeffs += wt.weight * term.separable_coeffs();
      continue;
    }
    for (const auto& c : term.components()) {
      if (c.coeff == 0.0) continue;
      const auto key = std::make_pair(c.snapshot.get(), term.oracle().get());
      auto [it, fresh] = gen_index.emplace(key, generic_.size());
      if (fresh) {
        generic_.push_back({c.snapshot, term.oracle(), 0.0, term.noise_source(), term.noise_draws()});
      }
      generic_[it->second].coeff += wt.weight * c.coeff;
    }
  }
}

void PotentialEvaluator::evaluate(const Matrix& points, Vector* values, Matrix* grads) const {
  if (points.cols() != dim_) throw DimensionMismatch("potential: point dimension");
  const Eigen::Index n = points.rows();
  Vector vals = quad_coeff_ * points.rowwise().squaredNorm();
  Matrix grd = (2.0 * quad_coeff_) * points;
  std::vector<double> tmp(static_cast<std::size_t>(dim_));
  for (const auto& group : separable_) {
    const Point coeffs = as_point(group.coeffs);
    for (Eigen::Index r = 0; r < n; ++r) {
      vals[r] += group.basis->contract(side_, coeffs, row_view(points, r), tmp);
      for (int i = 0; i < dim_; ++i) grd(r, i) += tmp[static_cast<std::size_t>(i)];
    }
  }
  Vector v;
  Matrix g;
  for (const auto& group : generic_) {
    group.oracle->average_against(opponent(side_), group.snapshot->positions, points, v, g);
    vals += group.coeff * v;
    grd += group.coeff * g;
  }
  if (values) *values = std::move(vals);
  if (grads) *grads = std::move(grd);
}

}  // namespace papal
