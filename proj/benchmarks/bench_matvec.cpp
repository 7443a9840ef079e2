#include <benchmark/benchmark.h>

#include <memory>

#include "dmx/cli/datasets.hpp"
#include "dmx/engine.hpp"
#include "dmx/naive.hpp"

namespace {

std::shared_ptr<const dmx::PointSet> points(std::size_t n, std::size_t d, bool simplex = false) {
  return std::make_shared<const dmx::PointSet>(simplex ? dmx::cli::simplex_points(n, d, 7)
                                                       : dmx::cli::gaussian_mixture(n, d, 7));
}

void run_fast(benchmark::State& state, const dmx::Kernel& k, bool simplex) {
  const auto n = std::size_t(state.range(0));
  auto X = points(n, 16, simplex);
  auto engine = dmx::make_engine(k, X);
  const auto z = dmx::cli::gaussian_vector(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(engine->query(z));
  state.SetComplexityN(state.range(0));
}

void BM_fast_l1(benchmark::State& s) { run_fast(s, dmx::Kernel::l1(), false); }
void BM_fast_l2sq(benchmark::State& s) { run_fast(s, dmx::Kernel::l2sq(), false); }
void BM_fast_lpp3(benchmark::State& s) { run_fast(s, dmx::Kernel::lpp(3), false); }
void BM_fast_kl(benchmark::State& s) { run_fast(s, dmx::Kernel::kl(), true); }
void BM_fast_poly2(benchmark::State& s) { run_fast(s, dmx::Kernel::poly(2), false); }

void BM_naive_l1(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  auto X = points(n, 16);
  const auto z = dmx::cli::gaussian_vector(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dmx::naive_matvec(dmx::Kernel::l1(), *X, z));
  state.SetComplexityN(state.range(0));
}

void BM_preprocess_l1(benchmark::State& state) {
  auto X = points(std::size_t(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(dmx::make_engine(dmx::Kernel::l1(), X));
}

void BM_approx_l2(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  auto X = points(n, 16);
  dmx::EngineOptions o;
  o.eps = 0.3;
  auto engine = dmx::make_engine(dmx::Kernel::l2(), X, o);
  const auto z = dmx::cli::gaussian_vector(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(engine->query(z));
}

}  // namespace

BENCHMARK(BM_fast_l1)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_fast_l2sq)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_fast_lpp3)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_fast_kl)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_fast_poly2)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_naive_l1)->RangeMultiplier(4)->Range(256, 4096)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_preprocess_l1)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_approx_l2)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
