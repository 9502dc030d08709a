#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "optbench/optbench.hpp"

namespace {

using namespace optbench;

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// One in-place step on a fixed random gradient; arg 0 is the algorithm, arg 1 the dimension.
void BM_Step(benchmark::State& state) {
  const auto algorithm = kAllAlgorithms[static_cast<std::size_t>(state.range(0))];
  const auto dim = static_cast<std::size_t>(state.range(1));
  Optimizer opt(OptimizerSpec::defaults(algorithm), dim);
  auto params = random_vector(dim, 1);
  const auto grads = random_vector(dim, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opt.step_in_place(params, grads));
  }
  state.SetLabel(std::string(to_string(algorithm)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(dim));
}
BENCHMARK(BM_Step)->ArgsProduct({benchmark::CreateDenseRange(0, 7, 1), {64, 4096, 1 << 18}});

void BM_DiffgradVariant(benchmark::State& state) {
  OptimizerSpec spec = OptimizerSpec::defaults(Algorithm::diffgrad);
  spec.dfc_variant = static_cast<FrictionVariant>(state.range(0));
  const std::size_t dim = 4096;
  Optimizer opt(spec, dim);
  auto params = random_vector(dim, 1);
  const auto grads = random_vector(dim, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opt.step_in_place(params, grads));
  }
  state.SetLabel(std::string(to_string(spec.dfc_variant)));
}
BENCHMARK(BM_DiffgradVariant)->DenseRange(0, 6);

void BM_SyntheticRun(benchmark::State& state) {
  const auto spec = synthetic_spec(Algorithm::diffgrad);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_synthetic_experiment(SyntheticFunction::f3, spec));
  }
}
BENCHMARK(BM_SyntheticRun);

void BM_MlpBatchLoss(benchmark::State& state) {
  const auto data = generate_two_moons(200, 0.2, 42);
  const auto model = MlpModel::glorot({2, 16, 2}, 42);
  std::vector<std::size_t> batch(32);
  for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = i * 6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch_loss(model, data, batch, 0.0));
  }
}
BENCHMARK(BM_MlpBatchLoss);

}  // namespace

BENCHMARK_MAIN();
