#include <benchmark/benchmark.h>

#include "probwave/sturm_liouville.hpp"

namespace {

probwave::SLProblem box(std::size_t n_points) {
  probwave::SLProblem p;
  p.x_end = 3.0;
  p.kx = [](double) { return 0.7; };
  p.potential = [](double x) { return 0.5 * x * x; };
  p.n_eigen = 6;
  p.n_points = n_points;
  return p;
}

void BM_Shooting(benchmark::State& state) {
  const auto p = box(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(probwave::solve_sturm_liouville(p, probwave::SlBackend::Shooting));
  }
}
BENCHMARK(BM_Shooting)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_DenseMatrix(benchmark::State& state) {
  const auto p = box(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(probwave::solve_sturm_liouville(p, probwave::SlBackend::DenseMatrix));
  }
}
BENCHMARK(BM_DenseMatrix)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
