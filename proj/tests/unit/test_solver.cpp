#include <gtest/gtest.h>

#include <filesystem>

#include "papal/diagnostics.hpp"
#include "papal/solver.hpp"
#include "test_util.hpp"

using namespace papal;

namespace {

SolverConfig small_config() {
  SolverConfig c;
  c.T = 4;
  c.M = 200;
  c.sampler.step = 0.05;
  c.sampler.iterations = 40;
  c.seed = 11;
  return c;
}

}  // namespace

TEST(Solver, HistoriesHaveOneEntryPerGeneration) {
  const auto res = run_papal(test::sine(1, 0.7, 0.5), small_config());
  EXPECT_EQ(res.x_history.size(), 5u);
  EXPECT_EQ(res.y_history.size(), 5u);
  EXPECT_EQ(res.g_history.size(), 5u);
  EXPECT_EQ(res.h_history.size(), 5u);
  EXPECT_EQ(res.trace.size(), 4u);
  EXPECT_EQ(res.g().size(), 4u);
  EXPECT_EQ(res.chosen_t, 4);
  for (std::size_t t = 0; t < res.x_history.size(); ++t) EXPECT_EQ(res.x_history[t]->generation, t);
  EXPECT_EQ(res.x_hat.positions, res.x_history.back()->positions);
}

TEST(Solver, SameSeedReproducesRun) {
  const auto a = run_papal(test::sine(1, 0.7, 0.5), small_config());
  const auto b = run_papal(test::sine(1, 0.7, 0.5), small_config());
  EXPECT_EQ(a.x_hat.positions, b.x_hat.positions);
  EXPECT_EQ(a.y_hat.positions, b.y_hat.positions);
  auto other = small_config();
  other.seed = 12;
  EXPECT_NE(run_papal(test::sine(1, 0.7, 0.5), other).x_hat.positions, a.x_hat.positions);
}

TEST(Solver, ZeroGameStaysAtPrior) {
  auto cfg = small_config();
  cfg.M = 4000;
  cfg.sampler.kind = SamplerKind::kMala;
  cfg.sampler.step = 0.2;
  const auto res = run_papal(test::zero_payoff(1), cfg);
  const double var = (res.x_hat.positions.array() - res.x_hat.positions.mean()).square().mean();
  EXPECT_NEAR(var, 0.5, 4 * 0.5 * std::sqrt(2.0 / cfg.M));
  EXPECT_NEAR(res.g().quad_coeff(), 1.0, 1e-12);
}

TEST(Solver, SymmetricGameReachesSmallGap) {
  auto cfg = small_config();
  cfg.T = 8;
  cfg.M = 500;
  cfg.gap_grid_nodes = 256;
  const auto res = run_papal(test::sine(1, 0.0, 1.0), cfg);
  for (const auto& rec : res.trace) EXPECT_TRUE(std::isfinite(rec.gap_estimate));
  EXPECT_LT(res.trace.back().gap_estimate, 0.05);
}

TEST(Solver, TraceWithoutGridHasNanGap) {
  const auto res = run_papal(test::sine(1, 0.7, 0.5), small_config());
  EXPECT_TRUE(std::isnan(res.trace.front().gap_estimate));
  EXPECT_EQ(res.trace.front().wall_ms, 0.0);
}

TEST(Solver, SupNormsRespectBounds) {
  auto cfg = small_config();
  cfg.lambda2 = 0.5;
  const auto res = run_papal(test::sine(1, 0.7, 1.0), cfg);
  for (const auto& rec : res.trace) {
    EXPECT_LE(rec.sup_norm_h, 3 / cfg.lambda2);
    EXPECT_LE(rec.sup_norm_g, 1 / cfg.lambda2);
  }
}

TEST(Solver, DegenerateNoiseMatchesDeterministicRun) {
  const auto f = test::sine(1, 0.7, 0.5);
  const auto det = run_papal(f, small_config());
  const auto sto = run_stochastic_papal(std::make_shared<DegenerateNoisePayoff>(f), small_config(), 16);
  EXPECT_EQ(det.x_hat.positions, sto.x_hat.positions);
  EXPECT_EQ(det.y_hat.positions, sto.y_hat.positions);
}

TEST(Solver, StochasticRunAttachesSharedDraws) {
  const auto f = test::sine(1, 0.7, 0.5);
  const auto res = run_stochastic_papal(std::make_shared<MultiplicativeNoisePayoff>(f, 1.0),
                                        small_config(), 8);
  for (std::size_t k = 0; k < res.h().size(); ++k) {
    const auto& phi = *res.h().terms()[k].term;
    const auto& psi = *res.g().terms()[k].term;
    EXPECT_EQ(phi.noise_draws().size(), 8u);
    EXPECT_EQ(phi.noise_draws(), psi.noise_draws());
  }
}

TEST(Solver, WarmStartAndSamplersRun) {
  for (auto kind : {SamplerKind::kUla, SamplerKind::kMala, SamplerKind::kProximal, SamplerKind::kSgld}) {
    auto cfg = small_config();
    cfg.sampler.kind = kind;
    cfg.sampler.iterations = 10;
    cfg.sampler.inner_iterations = 3;
    cfg.warm_start = true;
    const auto res = run_papal(test::sine(1, 0.7, 0.5), cfg);
    EXPECT_TRUE(res.x_hat.all_finite()) << to_string(kind);
  }
}

TEST(Solver, WritesCheckpoints) {
  const auto dir = std::filesystem::temp_directory_path() / "papal_solver_ckpt";
  std::filesystem::remove_all(dir);
  auto cfg = small_config();
  cfg.checkpoint_every = 2;
  cfg.checkpoint_dir = dir.string();
  const auto res = run_papal(test::sine(1, 0.7, 0.5), cfg);
  EXPECT_TRUE(std::filesystem::exists(dir / "t2_x.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "t4_y.csv"));
  EXPECT_EQ(load_ensemble((dir / "t4_x.csv").string()).positions, res.x_hat.positions);
  std::filesystem::remove_all(dir);
}

TEST(Solver, ConfigValidation) {
  auto cfg = small_config();
  cfg.M = 0;
  EXPECT_THROW(run_papal(test::sine(1, 0.7, 0.5), cfg), InvalidArgument);
  cfg = small_config();
  cfg.lambda2 = -1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config();
  auto sched = default_schedule(1.0);
  sched.overrides[2].mu = 2.0;
  cfg.schedule = sched;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Solver, UnequalDimensionsKeepEnsembleShapes) {
  const auto res = run_papal(std::make_shared<ConstantPayoff>(1, 2, 0.0), small_config());
  EXPECT_EQ(res.x_hat.positions.cols(), 1);
  EXPECT_EQ(res.y_hat.positions.cols(), 2);
}

TEST(Solver, OptionOneAlwaysPicksLastIterate) {
  CounterStream rng(1);
  const auto s = default_schedule(1.0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(select_output_index(7, OutputOption::kLastIterate, s, rng), 7);
}

TEST(Solver, GammaOptionFavoursLateIterates) {
  CounterStream rng(2);
  const auto s = default_schedule(1.0);
  int late = 0;
  for (int i = 0; i < 2000; ++i) late += select_output_index(5, OutputOption::kGammaWeighted, s, rng) == 5;
  // P[t = T] = (1 - mu) / (1 - mu^T) ~ 0.62 for mu ~ 0.38.
  const double mu = s.mu;
  const double p = (1 - mu) / (1 - std::pow(mu, 5));
  EXPECT_NEAR(late / 2000.0, p, 4 * std::sqrt(p * (1 - p) / 2000));
}

TEST(Solver, SelectOutputReturnsMatchingSnapshots) {
  const auto res = run_papal(test::sine(1, 0.7, 0.5), small_config());
  CounterStream rng(3);
  const auto [x, y] = select_output(res, OutputOption::kLastIterate, rng);
  EXPECT_EQ(x.get(), res.x_history.back().get());
  EXPECT_EQ(y.get(), res.y_history.back().get());
}

TEST(Solver, OutputOptionNames) {
  EXPECT_EQ(parse_output_option("I"), OutputOption::kLastIterate);
  EXPECT_EQ(parse_output_option("II-mu"), OutputOption::kMuWeighted);
  EXPECT_EQ(parse_output_option("II-gamma"), OutputOption::kGammaWeighted);
  EXPECT_THROW(parse_output_option("III"), InvalidArgument);
  EXPECT_EQ(to_string(OutputOption::kGammaWeighted), "II-gamma");
}
