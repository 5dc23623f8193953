#include <benchmark/benchmark.h>

#include "skiorder/lambda_ca.hpp"
#include "skiorder/metrics.hpp"
#include "skiorder/random.hpp"
#include "skiorder/swarmsim.hpp"
#include "skiorder/trajmat.hpp"

using namespace skiorder;

namespace {

Eigen::MatrixXd noise(Eigen::Index m, Eigen::Index n) {
  Rng rng(1);
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a;
}

void BM_Analyze(benchmark::State& state) {
  const Eigen::MatrixXd a = noise(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_all(preprocess(a)));
  }
}
BENCHMARK(BM_Analyze)->Args({100, 500})->Args({230, 443})->Args({50, 5000})->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  SimConfig cfg;
  cfg.model = static_cast<Model>(state.range(0));
  state.SetLabel(to_string(cfg.model));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(cfg));
  }
}
BENCHMARK(BM_Simulate)->DenseRange(0, static_cast<int>(kAllModels.size()) - 1)->Unit(benchmark::kMillisecond);

void BM_CaRun(benchmark::State& state) {
  CAConfig cfg;
  cfg.lambda = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
}
BENCHMARK(BM_CaRun)->Arg(0)->Arg(37)->Arg(99)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
