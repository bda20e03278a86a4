#include <benchmark/benchmark.h>

#include <memory>

#include "papal/diagnostics.hpp"
#include "papal/ensemble.hpp"
#include "papal/games.hpp"
#include "papal/potential.hpp"
#include "papal/sampler.hpp"

namespace {

using namespace papal;

// Potential after t outer steps on the sine game, M atoms per snapshot.
FlattenedPotential build_potential(const PayoffPtr& f, int t, Eigen::Index M) {
  auto pot = FlattenedPotential::prior(Player::kMin, f->dim_x(), 1.0, 1.0);
  for (int s = 1; s <= t; ++s) {
    auto y = freeze(sample_prior(f->dim_y(), M, 1.0, 1.0, {1, static_cast<std::uint64_t>(s), StreamTag::kPriorY}));
    pot = pot.extended(make_psi_term(y, f), 0.618);
  }
  return pot;
}

void BM_PotentialGradient(benchmark::State& state) {
  const auto M = static_cast<Eigen::Index>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  const auto f = std::make_shared<SinePayoff>(1, 0.0, 1.0);
  const auto pot = build_potential(f, t, M).evaluator();
  const Matrix queries = sample_prior(1, M, 1.0, 1.0, {2, 0, StreamTag::kPriorX}).positions;
  Vector values(M);
  Matrix grads(M, 1);
  for (auto _ : state) {
    pot.evaluate(queries, &values, &grads);
    benchmark::DoNotOptimize(grads.data());
  }
  state.SetItemsProcessed(state.iterations() * M);
}
BENCHMARK(BM_PotentialGradient)->Args({1000, 5})->Args({1000, 20})->Args({4000, 20});

void BM_PotentialGradientGan(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  GameParams gp;
  gp.dim = d;
  const auto f = make_builtin("gan-gauss", gp);
  const auto pot = build_potential(f, 5, 1000).evaluator();
  const Matrix queries = sample_prior(d, 1000, 1.0, 1.0, {2, 0, StreamTag::kPriorX}).positions;
  Vector values(queries.rows());
  Matrix grads(queries.rows(), d);
  for (auto _ : state) {
    pot.evaluate(queries, &values, &grads);
    benchmark::DoNotOptimize(grads.data());
  }
  state.SetItemsProcessed(state.iterations() * queries.rows());
}
BENCHMARK(BM_PotentialGradientGan)->Arg(5)->Arg(100);

void BM_UlaStep(benchmark::State& state) {
  const auto M = static_cast<Eigen::Index>(state.range(0));
  const QuadraticTarget target(1, 2.0);
  auto ensemble = sample_prior(1, M, 1.0, 1.0, {3, 0, StreamTag::kPriorX});
  std::uint64_t generation = 0;
  for (auto _ : state) {
    auto res = ula_chain(target, ensemble, {0.05, 1}, {3, ++generation, StreamTag::kChainX});
    benchmark::DoNotOptimize(res.ensemble.positions.data());
  }
  state.SetItemsProcessed(state.iterations() * M);
}
BENCHMARK(BM_UlaStep)->Arg(2000)->Arg(100000);

void BM_DualityGap(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  const auto f = std::make_shared<SinePayoff>(1, 0.7, 0.5);
  const auto game = make_game_grid(f, 1.0, 1.0, nodes);
  const auto p = prior_density(game.grid_x(), 1.0, 1.0);
  const auto q = prior_density(game.grid_y(), 1.0, 1.0);
  for (auto _ : state) {
    auto report = duality_gap(p, q, game, 1.0, 1.0);
    benchmark::DoNotOptimize(report.gap);
  }
}
BENCHMARK(BM_DualityGap)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
