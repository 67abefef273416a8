#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "spindet/detectors_approx.hpp"
#include "spindet/detectors_classical.hpp"
#include "spindet/detectors_lrt.hpp"
#include "spindet/signal_models.hpp"

namespace {

std::vector<double> noise_vector(std::size_t n) {
  std::mt19937_64 engine(12);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> y(n);
  for (auto& v : y) v = dist(engine);
  return y;
}

void BM_GenTelegraph(benchmark::State& state) {
  const spindet::TelegraphModel model(1.0, 0.9995, 0.9995,
                                      static_cast<std::size_t>(state.range(0)),
                                      1e-3);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spindet::gen_telegraph(model, seed++));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenTelegraph)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oN);

void BM_RtLogLrt(benchmark::State& state) {
  const auto y = noise_vector(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        spindet::rt_log_lrt(y, 1.0, 10.0, 0.9995, 0.9995).value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RtLogLrt)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oN);

void BM_RwLogLrt(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const spindet::WalkModel model(m, 1.0 / m, 0.5, 0.5, 0.5, 0.5, n);
  const auto y = noise_vector(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spindet::rw_log_lrt(y, model, 10.0).value);
  }
  state.SetComplexityN(static_cast<std::int64_t>(m) * state.range(1));
}
BENCHMARK(BM_RwLogLrt)
    ->ArgsProduct({{2, 4, 8, 16}, {1 << 12, 1 << 14, 1 << 16}})
    ->Complexity(benchmark::oN);

void BM_FilteredEnergy(benchmark::State& state) {
  const auto y = noise_vector(static_cast<std::size_t>(state.range(0)));
  const spindet::LowPassFilter filter(0.999);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spindet::energy_statistic(y, &filter).value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FilteredEnergy)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oN);

void BM_HybridStatistic(benchmark::State& state) {
  const auto y = noise_vector(static_cast<std::size_t>(state.range(0)));
  const double alpha = 0.999;
  const auto constants =
      spindet::hybrid_constants(0.9998, 0.9992, 1.0, 10.0, alpha);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        spindet::hybrid_statistic(y, constants, alpha).value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HybridStatistic)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
