#include <benchmark/benchmark.h>

#include <random>

#include "certilab/automata.hpp"
#include "certilab/corpus.hpp"
#include "certilab/kernel.hpp"
#include "certilab/kernel_scheme.hpp"
#include "certilab/treedepth.hpp"
#include "certilab/treedepth_cert.hpp"

namespace {

using namespace certilab;

void BM_TdCertifyPath(benchmark::State& state) {
  Graph g = make_path(static_cast<std::size_t>(state.range(0)));
  Model m = separator_model(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(td_certify(g, m));
  }
}
BENCHMARK(BM_TdCertifyPath)->RangeMultiplier(10)->Range(100, 10000);

void BM_TdVerifyPath(benchmark::State& state) {
  Graph g = make_path(static_cast<std::size_t>(state.range(0)));
  Model m = separator_model(g);
  Assignment a = td_certify(g, m);
  auto s = treedepth_scheme(m.edge_depth());
  for (auto _ : state) {
    benchmark::DoNotOptimize(accepted_everywhere(*s, g, a));
  }
  state.counters["max_bits"] = static_cast<double>(measure_size(a));
}
BENCHMARK(BM_TdVerifyPath)->RangeMultiplier(10)->Range(100, 10000);

void BM_KReduceBounded(benchmark::State& state) {
  std::mt19937_64 rng(3);
  auto sample = random_bounded_td_graph(static_cast<std::size_t>(state.range(0)), 3, 0.3, rng);
  Model m = make_coherent(sample.graph, Model(sample.graph, sample.model));
  for (auto _ : state) {
    benchmark::DoNotOptimize(k_reduce(sample.graph, m, 2).kernel.size());
  }
}
BENCHMARK(BM_KReduceBounded)->RangeMultiplier(10)->Range(100, 10000);

void BM_FindRunPath(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  RootedTree t = root_tree(make_path(n), 1);
  std::vector<std::size_t> labels(n, 0);
  UopAutomaton a = max_children(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_run(t, labels, a).has_value());
  }
}
BENCHMARK(BM_FindRunPath)->RangeMultiplier(10)->Range(100, 10000);

}  // namespace
