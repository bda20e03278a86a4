#include <gtest/gtest.h>

#include "papal/baseline.hpp"
#include "test_util.hpp"

using namespace papal;

TEST(Baseline, ZeroGameLeavesWeightsUnchanged) {
  auto x = WeightedEnsemble::uniform(test::random_matrix(10, 1, 1.0, 1));
  auto y = WeightedEnsemble::uniform(test::random_matrix(10, 1, 1.0, 2));
  const Vector before = x.log_weights;
  const auto f = test::zero_payoff(1);
  for (int i = 0; i < 20; ++i) weight_da_step(x, y, *f, 1.0, 0.5);
  EXPECT_LT((x.log_weights - before).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Baseline, TwoParticleStepMatchesHandComputation) {
  Matrix px(2, 1), py(2, 1);
  px << 0.0, 1.0;
  py << 0.5, -0.5;
  auto x = WeightedEnsemble::uniform(px);
  auto y = WeightedEnsemble::uniform(py);
  // f(x, y) = x * y, a "function" game.
  const FunctionPayoff f(
      1, 1, [](Point a, Point b) { return a[0] * b[0]; },
      [](Point, Point b, MutPoint out) { out[0] = b[0]; },
      [](Point a, Point, MutPoint out) { out[0] = a[0]; }, 1.0, 1.0);
  const double l2 = 0.5, step = 0.2;
  weight_da_step(x, y, f, l2, step);
  // a_r = mean_s x_r y_s = 0 for both x particles; b_s = mean_r x_r y_s = y_s / 2.
  EXPECT_NEAR(x.weights()[0], 0.5, 1e-15);
  const double e0 = std::exp(step / l2 * 0.25), e1 = std::exp(step / l2 * -0.25);
  EXPECT_NEAR(y.weights()[0], e0 / (e0 + e1), 1e-15);
  EXPECT_NEAR(y.weights()[1], e1 / (e0 + e1), 1e-15);
}

TEST(Baseline, SimplexAndPositionsPreservedOverManySteps) {
  const auto f = test::sine(1, 0.7, 1.0);
  auto x = WeightedEnsemble::uniform(test::random_matrix(8, 1, 1.0, 3));
  auto y = WeightedEnsemble::uniform(test::random_matrix(8, 1, 1.0, 4));
  const Matrix px = x.positions, py = y.positions;
  Matrix F(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int s = 0; s < 8; ++s) F(r, s) = f->value(row_view(px, r), row_view(py, s));
  for (int i = 0; i < 100000; ++i) weight_da_step(x, y, *f, 0.1, 0.05, &F);
  EXPECT_NEAR(x.weights().sum(), 1.0, 1e-12);
  EXPECT_NEAR(y.weights().sum(), 1.0, 1e-12);
  EXPECT_TRUE((x.weights().array() >= 0).all());
  EXPECT_EQ(x.positions, px);
  EXPECT_EQ(y.positions, py);
}

TEST(Baseline, MatrixAndOracleAveragesAgree) {
  const auto f = test::sine(2, 0.7, 1.0);
  auto x = WeightedEnsemble::uniform(test::random_matrix(6, 2, 1.0, 5));
  auto y = WeightedEnsemble::uniform(test::random_matrix(7, 2, 1.0, 6));
  x.log_weights[2] += 1.0;
  x.normalize();
  Matrix F(6, 7);
  for (int r = 0; r < 6; ++r)
    for (int s = 0; s < 7; ++s) F(r, s) = f->value(row_view(x.positions, r), row_view(y.positions, s));
  const auto a = weighted_averages(x, y, *f);
  const auto b = weighted_averages(x, y, *f, &F);
  EXPECT_LT((a.against_y - b.against_y).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((a.against_x - b.against_x).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Baseline, LandscapeObjectiveBoundedByBestInitialParticle) {
  GameParams gp;
  gp.dim = 2;
  const auto f = make_builtin("landscape-min", gp);
  const auto* land = dynamic_cast<const LandscapePayoff*>(f.get());
  BaselineConfig cfg;
  cfg.M = 200;
  cfg.T = 5;
  cfg.inner_iterations = 50;
  cfg.lambda1 = 1.0;
  cfg.lambda2 = 0.1;
  const auto res = run_weight_baseline(f, cfg);
  double best = 1e9, objective = 0;
  const Vector w = res.x.weights();
  for (Eigen::Index r = 0; r < res.x.count(); ++r) {
    const double v = land->landscape(row_view(res.x.positions, r));
    best = std::min(best, v);
    objective += w[r] * v;
  }
  EXPECT_GE(objective, best - 1e-12);
}

TEST(Baseline, TraceSchemaMatchesSolver) {
  BaselineConfig cfg;
  cfg.M = 50;
  cfg.T = 3;
  cfg.inner_iterations = 5;
  const auto res = run_weight_baseline(test::sine(1, 0.7, 1.0), cfg);
  ASSERT_EQ(res.trace.size(), 3u);
  EXPECT_TRUE(std::isnan(res.trace[0].gap_estimate));
  EXPECT_EQ(res.trace[2].t, 3);
  EXPECT_EQ(res.trace[0].inner_accept_rate, 1.0);
}

TEST(Baseline, PositionsArePriorSamples) {
  BaselineConfig cfg;
  cfg.M = 30;
  cfg.T = 1;
  cfg.inner_iterations = 1;
  const auto res = run_weight_baseline(test::sine(1, 0.7, 1.0), cfg);
  EXPECT_EQ(res.x.positions, sample_prior(1, 30, 1.0, 1.0, {cfg.seed, 0, StreamTag::kPriorX}).positions);
}

TEST(Baseline, RejectsBadStep) {
  auto x = WeightedEnsemble::uniform(Matrix::Zero(2, 1));
  auto y = WeightedEnsemble::uniform(Matrix::Zero(2, 1));
  EXPECT_THROW(weight_da_step(x, y, *test::zero_payoff(1), 1.0, 0.0), InvalidArgument);
}
