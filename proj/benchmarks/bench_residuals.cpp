#include <benchmark/benchmark.h>

#include "probwave/analysis.hpp"
#include "probwave/freewave.hpp"
#include "probwave/spectral.hpp"

namespace {

void BM_ResidualAnalytic(benchmark::State& state) {
  const auto s = probwave::make_free_state(1.0, 1.0);
  const probwave::Grid1D grid{2.0, 4.0, 101, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(probwave::schrodinger_residual(s, grid));
}
BENCHMARK(BM_ResidualAnalytic);

void BM_ResidualFiniteDifference(benchmark::State& state) {
  const auto s = probwave::make_free_state(1.0, 1.0);
  const probwave::Grid1D grid{2.0, 4.0, 101, 1.0};
  probwave::ResidualOptions opt;
  opt.method = probwave::DerivativeMethod::FiniteDifference;
  for (auto _ : state) benchmark::DoNotOptimize(probwave::schrodinger_residual(s, grid, opt));
}
BENCHMARK(BM_ResidualFiniteDifference);

void BM_Commutator(benchmark::State& state) {
  const auto s = probwave::make_free_state(1.0, 1.0);
  std::vector<probwave::ComplexCoordinate> grid;
  for (int i = 0; i < 16; ++i) {
    grid.push_back(probwave::ComplexCoordinate::on_canonical_line(0.5 + 0.1 * i, 0.1 * i));
  }
  const auto pair = static_cast<probwave::CommutatorPair>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(probwave::commutator_check(pair, s, grid));
}
BENCHMARK(BM_Commutator)->Arg(0)->Arg(1);

void BM_ContourSquare(benchmark::State& state) {
  const auto s = probwave::make_free_state(1.0, 1.0);
  const probwave::Contour square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}, {}, true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        probwave::contour_integral(probwave::ContourDensity::IncomingP1, s, square));
  }
}
BENCHMARK(BM_ContourSquare);

}  // namespace
