#include <benchmark/benchmark.h>

#include "dmx/builder/linf_matrix.hpp"
#include "dmx/builder/matrix_builder.hpp"
#include "dmx/cli/datasets.hpp"
#include "dmx/naive.hpp"

namespace {

void BM_approx_l1_matrix(benchmark::State& state) {
  const auto X = dmx::cli::gaussian_mixture(std::size_t(state.range(0)), std::size_t(state.range(1)), 11);
  dmx::BuildOptions opts;
  opts.path = state.range(2) ? dmx::RowPath::packed : dmx::RowPath::reference;
  for (auto _ : state) benchmark::DoNotOptimize(dmx::approx_l1_matrix(X, 0.25, 5, opts));
}

void BM_naive_l1_matrix(benchmark::State& state) {
  const auto X = dmx::cli::gaussian_mixture(std::size_t(state.range(0)), std::size_t(state.range(1)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(dmx::naive_matrix(dmx::Kernel::l1(), X));
}

void BM_forest(benchmark::State& state) {
  const auto X = dmx::cli::gaussian_mixture(std::size_t(state.range(0)), 64, 11);
  for (auto _ : state) benchmark::DoNotOptimize(dmx::build_forest(X, 0.25, 5));
}

void BM_linf_exact(benchmark::State& state) {
  const auto X = dmx::cli::uniform_integer(std::size_t(state.range(0)), 16, 3, 11);
  for (auto _ : state) benchmark::DoNotOptimize(dmx::linf_matrix_bounded(X, dmx::LinfMode::exact));
}

void BM_naive_linf(benchmark::State& state) {
  const auto X = dmx::cli::uniform_integer(std::size_t(state.range(0)), 16, 3, 11);
  for (auto _ : state) benchmark::DoNotOptimize(dmx::naive_matrix(dmx::Kernel::linf(), X));
}

}  // namespace

BENCHMARK(BM_approx_l1_matrix)
    ->Args({2000, 64, 0})
    ->Args({2000, 64, 1})
    ->Args({4000, 64, 0})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_naive_l1_matrix)->Args({2000, 64})->Args({4000, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_forest)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_linf_exact)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_naive_linf)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
