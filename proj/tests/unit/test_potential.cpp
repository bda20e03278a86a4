#include <gtest/gtest.h>

#include "papal/potential.hpp"
#include "papal/schedule.hpp"
#include "test_util.hpp"

using namespace papal;

namespace {

double empirical_mean(const PayoffOracle& f, const Matrix& atoms, Point z, Player atoms_player) {
  double s = 0;
  for (Eigen::Index r = 0; r < atoms.rows(); ++r) {
    s += atoms_player == Player::kMin ? f.value(row_view(atoms, r), z) : f.value(z, row_view(atoms, r));
  }
  return s / static_cast<double>(atoms.rows());
}

// Unrolled recursion h_t = (phi_t + lambda1 |y|^2 + tau_t h_{t-1}) / (lambda2 + tau_t),
// evaluated straight from the payoff with no flattening.
struct DirectRecursion {
  PayoffPtr f;
  double l1, l2;
  std::vector<Matrix> xs;  // X^(0..t)
  std::vector<double> mus, taus;

  double h(int t, const Vector& y) const {
    if (t == 0) return l1 / l2 * y.squaredNorm();
    const Matrix& prev = xs[t - 1];
    const Matrix& prev2 = xs[std::max(t - 2, 0)];
    const double mu = mus[t - 1];
    const double phi = -(1 + mu) * empirical_mean(*f, prev, as_point(y), Player::kMin) +
                       mu * empirical_mean(*f, prev2, as_point(y), Player::kMin);
    const double tau = taus[t - 1];
    return (phi + l1 * y.squaredNorm() + tau * h(t - 1, y)) / (l2 + tau);
  }
};

}  // namespace

TEST(Potential, PriorIsPureQuadratic) {
  const auto pot = FlattenedPotential::prior(Player::kMax, 2, 1.5, 0.5);
  EXPECT_DOUBLE_EQ(pot.quad_coeff(), 3.0);
  const Vector z = (Vector(2) << 1.0, 2.0).finished();
  EXPECT_DOUBLE_EQ(pot.value(as_point(z)), 15.0);
  EXPECT_EQ(pot.size(), 0u);
}

TEST(Potential, FlattenedMatchesDirectRecursion) {
  const auto f = test::sine(1, 0.7, 1.0);
  DirectRecursion direct{f, 0.8, 0.6, {}, {}, {}};
  const auto sched = default_schedule(direct.l2);
  auto pot = FlattenedPotential::prior(Player::kMax, 1, direct.l1, direct.l2);
  std::vector<EnsembleSnapshot> snaps;
  for (int t = 0; t <= 10; ++t) {
    ParticleEnsemble e{test::random_matrix(40, 1, 0.8, 100 + t), static_cast<std::uint64_t>(t)};
    direct.xs.push_back(e.positions);
    snaps.push_back(freeze(std::move(e)));
  }
  for (int t = 1; t <= 10; ++t) {
    const double mu = sched.mu_at(t) * (1.0 - 0.05 * t);  // vary per step
    const double tau = sched.tau_at(t) * (1.0 + 0.1 * t);
    direct.mus.push_back(mu);
    direct.taus.push_back(tau);
    pot = pot.extended(make_phi_term(snaps[t - 1], snaps[std::max(t - 2, 0)], mu, f), tau);
    const Matrix ys = test::random_matrix(100, 1, 1.5, 500 + t);
    for (Eigen::Index r = 0; r < ys.rows(); ++r) {
      const Vector y = ys.row(r).transpose();
      EXPECT_NEAR(pot.value(as_point(y)), direct.h(t, y), 1e-10);
    }
  }
}

TEST(Potential, QuadCoefficientIsConserved) {
  auto pot = FlattenedPotential::prior(Player::kMin, 1, 0.3, 0.7);
  const auto f = test::sine(1, 0.7, 1.0);
  auto snap = freeze(ParticleEnsemble{Matrix::Zero(3, 1), 0});
  ParticleRng rng(CounterStream(77));
  for (int t = 0; t < 50; ++t) {
    pot = pot.extended(make_psi_term(snap, f), 0.01 + 5 * rng.uniform());
    EXPECT_NEAR(pot.quad_coeff(), 0.3 / 0.7, 1e-12);
  }
}

TEST(Potential, WeightsDecayGeometrically) {
  auto pot = FlattenedPotential::prior(Player::kMin, 1, 1.0, 1.0);
  const auto f = test::sine(1, 0.7, 1.0);
  auto snap = freeze(ParticleEnsemble{Matrix::Zero(2, 1), 0});
  const double tau = 0.618;
  for (int t = 0; t < 5; ++t) pot = pot.extended(make_psi_term(snap, f), tau);
  const auto w = pot.weights();
  for (std::size_t k = 1; k < w.size(); ++k) EXPECT_NEAR(w[k - 1] / w[k], tau / (1 + tau), 1e-14);
  EXPECT_NEAR(w.back(), 1 / (1 + tau), 1e-15);
}

TEST(Potential, PhiTermMatchesDefinition) {
  const auto f = test::sine(1, 0.7, 1.0);
  const auto a = freeze(ParticleEnsemble{test::random_matrix(30, 1, 1.0, 1), 1});
  const auto b = freeze(ParticleEnsemble{test::random_matrix(30, 1, 1.0, 2), 0});
  const double mu = 0.4;
  const auto phi = make_phi_term(a, b, mu, f);
  EXPECT_EQ(phi.side(), Player::kMax);
  const Vector y = (Vector(1) << 0.77).finished();
  const double expected = -(1 + mu) * empirical_mean(*f, a->positions, as_point(y), Player::kMin) +
                          mu * empirical_mean(*f, b->positions, as_point(y), Player::kMin);
  EXPECT_NEAR(phi.value(as_point(y)), expected, 1e-14);
  EXPECT_LE(std::abs(phi.value(as_point(y))), 1 + 2 * mu);
  EXPECT_NEAR(phi.sup_bound(), 1 + 2 * mu, 1e-15);
}

TEST(Potential, PhiWithRepeatedSnapshotCollapses) {
  const auto f = test::sine(1, 0.7, 1.0);
  const auto a = freeze(ParticleEnsemble{test::random_matrix(30, 1, 1.0, 1), 0});
  const auto phi = make_phi_term(a, a, 0.4, f);
  const Vector y = (Vector(1) << -0.3).finished();
  EXPECT_NEAR(phi.value(as_point(y)), -empirical_mean(*f, a->positions, as_point(y), Player::kMin),
              1e-14);
}

TEST(Potential, SupNormOfPayoffPartIsBounded) {
  const double l1 = 1.0, l2 = 0.5;
  const auto sched = default_schedule(l2);
  const auto f = test::sine(1, 0.7, 1.0);
  auto h = FlattenedPotential::prior(Player::kMax, 1, l1, l2);
  auto g = FlattenedPotential::prior(Player::kMin, 1, l1, l2);
  std::vector<EnsembleSnapshot> xs, ys;
  for (int t = 0; t <= 30; ++t) {
    xs.push_back(freeze(ParticleEnsemble{test::random_matrix(20, 1, 1.0, 10 + t), 0}));
    ys.push_back(freeze(ParticleEnsemble{test::random_matrix(20, 1, 1.0, 90 + t), 0}));
  }
  for (int t = 1; t <= 30; ++t) {
    h = h.extended(make_phi_term(xs[t - 1], xs[std::max(t - 2, 0)], sched.mu_at(t), f), sched.tau_at(t));
    g = g.extended(make_psi_term(ys[t], f), sched.eta_at(t));
  }
  EXPECT_LE(h.sup_bound(), 3 / l2 + 1e-12);
  EXPECT_LE(g.sup_bound(), 1 / l2 + 1e-12);
  const Matrix zs = test::random_matrix(10000, 1, 3.0, 4);
  for (Eigen::Index r = 0; r < zs.rows(); ++r) {
    const double q = zs(r, 0) * zs(r, 0);
    ASSERT_LE(std::abs(h.value(row_view(zs, r)) - h.quad_coeff() * q), 3 / l2);
    ASSERT_LE(std::abs(g.value(row_view(zs, r)) - g.quad_coeff() * q), 1 / l2);
  }
}

TEST(Potential, EvaluatorMatchesPointwiseAndFiniteDifferences) {
  GameParams gp;
  gp.dim = 2;
  for (const char* id : {"sine-shifted", "gan-gauss"}) {
    const auto f = make_builtin(id, gp);
    auto pot = FlattenedPotential::prior(Player::kMin, 2, 1.0, 0.8);
    for (int t = 0; t < 4; ++t) {
      auto snap = freeze(ParticleEnsemble{test::random_matrix(25, 2, 1.0, 60 + t), 0});
      pot = pot.extended(make_psi_term(snap, f), 0.5);
    }
    const Matrix zs = test::random_matrix(15, 2, 1.0, 70);
    Vector values;
    Matrix grads;
    pot.evaluator().evaluate(zs, &values, &grads);
    for (Eigen::Index r = 0; r < zs.rows(); ++r) {
      const auto pv = pot.eval_and_grad(row_view(zs, r));
      EXPECT_NEAR(values[r], pv.value, 1e-12) << id;
      EXPECT_LT((grads.row(r).transpose() - pv.grad).norm(), 1e-12) << id;
      for (int i = 0; i < 2; ++i) {
        const double fd = test::central_difference(
            [&](const Vector& z) { return pot.value(as_point(z)); }, zs.row(r).transpose(), i);
        EXPECT_NEAR(pv.grad[i], fd, 1e-6) << id;
      }
    }
  }
}

TEST(Potential, CollapsedAndGroupedEvaluationAgree) {
  const auto f = test::sine(1, 0.7, 1.0);
  auto pot = FlattenedPotential::prior(Player::kMax, 1, 1.0, 1.0);
  auto a = freeze(ParticleEnsemble{test::random_matrix(25, 1, 1.0, 3), 0});
  auto b = freeze(ParticleEnsemble{test::random_matrix(25, 1, 1.0, 4), 1});
  pot = pot.extended(make_phi_term(a, a, 0.3, f), 0.5).extended(make_phi_term(b, a, 0.3, f), 0.5);
  const Matrix zs = test::random_matrix(20, 1, 1.0, 5);
  Vector v1, v2;
  Matrix g1, g2;
  pot.evaluator({}, true).evaluate(zs, &v1, &g1);
  pot.evaluator({}, false).evaluate(zs, &v2, &g2);
  EXPECT_LT((v1 - v2).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((g1 - g2).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ(pot.evaluator({}, false).generic_groups().size(), 2u);
}

TEST(Potential, TruncationDropsOldTermsWithinBound) {
  const auto f = test::sine(1, 0.7, 1.0);
  auto pot = FlattenedPotential::prior(Player::kMin, 1, 1.0, 1.0);
  for (int t = 0; t < 60; ++t) {
    auto snap = freeze(ParticleEnsemble{test::random_matrix(10, 1, 1.0, 200 + t), 0});
    pot = pot.extended(make_psi_term(snap, f), 0.618);
  }
  const auto policy = TruncationPolicy::default_for(1.0);
  const auto ev = pot.evaluator(policy);
  EXPECT_LT(ev.retained_terms(), pot.size());
  EXPECT_GE(ev.retained_terms(), 1u);
  const Matrix zs = test::random_matrix(30, 1, 1.0, 6);
  Vector full, cut;
  Matrix g;
  pot.evaluator().evaluate(zs, &full, &g);
  ev.evaluate(zs, &cut, &g);
  EXPECT_LE((full - cut).cwiseAbs().maxCoeff(), ev.truncation_bound() + 1e-15);
}

TEST(Potential, TruncationKeepsNewestTerm) {
  const auto f = test::sine(1, 0.7, 1.0);
  auto snap = freeze(ParticleEnsemble{Matrix::Zero(2, 1), 0});
  auto pot = FlattenedPotential::prior(Player::kMin, 1, 1.0, 1.0).extended(make_psi_term(snap, f), 1e9);
  EXPECT_EQ(pot.evaluator(TruncationPolicy{true, 1.0}).retained_terms(), 1u);
}

TEST(Potential, RejectsMisuse) {
  const auto f = test::sine(1, 0.7, 1.0);
  auto snap = freeze(ParticleEnsemble{Matrix::Zero(2, 1), 0});
  const auto g = FlattenedPotential::prior(Player::kMin, 1, 1.0, 1.0);
  EXPECT_THROW(g.extended(make_phi_term(snap, snap, 0.5, f), 1.0), InvalidArgument);
  EXPECT_THROW(g.extended(make_psi_term(snap, f), 0.0), InvalidArgument);
  auto wide = freeze(ParticleEnsemble{Matrix::Zero(2, 3), 0});
  EXPECT_THROW(make_psi_term(wide, f), DimensionMismatch);
  EXPECT_THROW(FlattenedPotential::prior(Player::kMin, 1, 0.0, 1.0), InvalidArgument);
}

TEST(Potential, DumpListsTermsInOrder) {
  const auto f = test::sine(1, 0.7, 1.0);
  auto s0 = freeze(ParticleEnsemble{Matrix::Zero(2, 1), 0});
  auto s1 = freeze(ParticleEnsemble{Matrix::Zero(2, 1), 1});
  auto pot = FlattenedPotential::prior(Player::kMax, 1, 1.0, 1.0)
                 .extended(make_phi_term(s0, s0, 0.5, f), 1.0)
                 .extended(make_phi_term(s1, s0, 0.5, f), 1.0);
  const auto d = pot.dump();
  ASSERT_EQ(d.terms.size(), 2u);
  EXPECT_EQ(d.weights.size(), 2u);
  EXPECT_DOUBLE_EQ(d.quad_coeff, 1.0);
}
