#include <benchmark/benchmark.h>

#include <random>

#include "certilab/corpus.hpp"
#include "certilab/treedepth.hpp"

namespace {

using namespace certilab;

void BM_TreedepthExactPath(benchmark::State& state) {
  Graph g = make_path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(treedepth_exact(g).levels);
  }
}
BENCHMARK(BM_TreedepthExactPath)->DenseRange(8, 20, 4);

void BM_TreedepthExactRandom(benchmark::State& state) {
  std::mt19937_64 rng(1);
  Graph g = random_connected_graph(static_cast<std::size_t>(state.range(0)), 0.3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(treedepth_exact(g).levels);
  }
}
BENCHMARK(BM_TreedepthExactRandom)->DenseRange(8, 16, 4);

void BM_CopsRandom(benchmark::State& state) {
  std::mt19937_64 rng(2);
  Graph g = random_connected_graph(static_cast<std::size_t>(state.range(0)), 0.3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cops_robber_number(g));
  }
}
BENCHMARK(BM_CopsRandom)->DenseRange(6, 12, 3);

void BM_SeparatorModel(benchmark::State& state) {
  Graph g = make_path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(separator_model(g).levels());
  }
}
BENCHMARK(BM_SeparatorModel)->RangeMultiplier(10)->Range(100, 10000);

}  // namespace

BENCHMARK_MAIN();
