#include <benchmark/benchmark.h>

#include <vector>

#include "ssent/singleshot.hpp"
#include "ssent/tensorpower.hpp"

namespace {

ssent::ProbVec base_for(int d) {
  static const std::vector<std::vector<double>> bases = {
      {0.9, 0.1},
      {0.5, 0.3, 0.2},
      {0.4, 0.3, 0.2, 0.1},
  };
  return ssent::make_prob_vec(bases[static_cast<std::size_t>(d - 2)]);
}

void BM_BuildSerial(benchmark::State& state) {
  const auto p = base_for(static_cast<int>(state.range(0)));
  const auto n = static_cast<std::uint32_t>(state.range(1));
  for (auto _ : state) {
    auto spec = ssent::build_spectrum(p, n, ssent::Execution::serial);
    benchmark::DoNotOptimize(spec.blocks());
  }
}

void BM_BuildParallel(benchmark::State& state) {
  const auto p = base_for(static_cast<int>(state.range(0)));
  const auto n = static_cast<std::uint32_t>(state.range(1));
  for (auto _ : state) {
    auto spec = ssent::build_spectrum(p, n, ssent::Execution::parallel);
    benchmark::DoNotOptimize(spec.blocks());
  }
}

void BM_DistillAndCost(benchmark::State& state) {
  const auto p = base_for(static_cast<int>(state.range(0)));
  const auto spec = ssent::build_spectrum(p, static_cast<std::uint32_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssent::distill_eps(spec, 0.1).log2_m);
    benchmark::DoNotOptimize(ssent::cost_eps(spec, 0.1).log2_m);
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({2, 4096})->Args({2, 100000})->Args({3, 300})->Args({4, 200})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_BuildSerial)->Apply(sizes);
BENCHMARK(BM_BuildParallel)->Apply(sizes);
BENCHMARK(BM_DistillAndCost)->Apply(sizes);

BENCHMARK_MAIN();
