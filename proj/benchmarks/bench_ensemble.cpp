#include <benchmark/benchmark.h>

#include <cmath>

#include "probwave/measurement.hpp"

namespace {

probwave::SuperposedState three_way() {
  using probwave::make_free_state;
  return probwave::SuperposedState({{std::sqrt(0.5), make_free_state(1.0, 1.0)},
                                    {std::sqrt(0.3), make_free_state(2.0, 1.0)},
                                    {std::sqrt(0.2), make_free_state(3.0, 1.0)}});
}

void BM_Ensemble(benchmark::State& state) {
  const auto s = three_way();
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(probwave::run_ensemble(s, 100000, 42, workers));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_SampleOutcome(benchmark::State& state) {
  const auto s = three_way();
  probwave::RandomStream rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(probwave::sample_outcome(s, rng));
}
BENCHMARK(BM_SampleOutcome);

}  // namespace
