#include <benchmark/benchmark.h>

#include "scatnet/learn.hpp"
#include "scatnet/random.hpp"
#include "scatnet/scatter.hpp"

namespace {

using namespace scatnet;

ScatteringNetwork make_net(Eigen::Index n, Eigen::Index depth) {
  std::vector<NetworkLayer> layers;
  for (Eigen::Index m = 0; m < depth; ++m)
    layers.push_back({random_tight_frame(n, n, static_cast<std::uint64_t>(m) + 1),
                      BlockPartition::contiguous(n, 2)});
  return {std::move(layers), BlockPartition::full(n)};
}

void BM_ApplyModulus(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const auto op = random_tight_frame(n, n, 1);
  auto rng = make_rng(2);
  const Eigen::VectorXd x = gaussian_vector(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply_modulus(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ApplyModulus)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_AveragedScatter(benchmark::State& state) {
  const auto net = make_net(32, state.range(0));
  auto rng = make_rng(3);
  const Eigen::VectorXd x = gaussian_vector(rng, 32);
  for (auto _ : state) benchmark::DoNotOptimize(averaged_scatter(net, x));
}
BENCHMARK(BM_AveragedScatter)->DenseRange(1, 5);

void BM_ExpectedScatterExact(benchmark::State& state) {
  const auto net = make_net(16, 3);
  auto rng = make_rng(4);
  std::vector<Eigen::VectorXd> atoms;
  for (Eigen::Index a = 0; a < state.range(0); ++a)
    atoms.push_back(gaussian_vector(rng, 16));
  const auto dist = DiscreteDistribution::uniform(std::move(atoms));
  for (auto _ : state) benchmark::DoNotOptimize(expected_scatter_exact(net, dist));
}
BENCHMARK(BM_ExpectedScatterExact)->RangeMultiplier(2)->Range(2, 16);

void BM_EmpiricalMuBars(benchmark::State& state) {
  const auto net = make_net(16, 3);
  auto rng = make_rng(5);
  std::vector<Eigen::VectorXd> samples;
  for (Eigen::Index i = 0; i < state.range(0); ++i)
    samples.push_back(gaussian_vector(rng, 16));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_mu_bars(net, samples));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EmpiricalMuBars)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

LayerObjectiveState bench_state(Eigen::Index p, Eigen::Index n) {
  auto rng = make_rng(6);
  LayerObjectiveState state;
  state.centered_samples = gaussian_matrix(rng, p, n);
  state.centered_samples.rowwise() -= state.centered_samples.colwise().mean();
  state.stiefel_point = orthonormalize_columns(gaussian_matrix(rng, 2 * n, n));
  return state;
}

void BM_Objective(benchmark::State& state) {
  const auto s = bench_state(state.range(0), 16);
  for (auto _ : state) benchmark::DoNotOptimize(objective(s));
}
BENCHMARK(BM_Objective)->RangeMultiplier(4)->Range(64, 1024);

void BM_Gradient(benchmark::State& state) {
  const auto s = bench_state(state.range(0), 16);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(s));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(4)->Range(64, 1024);

void BM_OptimizeLayerSteps(benchmark::State& state) {
  auto s = bench_state(128, 8);
  s.config.max_iters = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(optimize_layer(s));
}
BENCHMARK(BM_OptimizeLayerSteps)->Arg(1)->Arg(5)->Arg(25);

}  // namespace

BENCHMARK_MAIN();
