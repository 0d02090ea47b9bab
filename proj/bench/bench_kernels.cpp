// Serial reference kernels vs their OpenMP counterparts.
//
//   ./bench_kernels --benchmark_filter=Histogram
//   OMP_NUM_THREADS=4 ./bench_kernels

#include <benchmark/benchmark.h>

#include <vector>

#include "smpcg/estimate.hpp"
#include "smpcg/graph.hpp"
#include "smpcg/rng.hpp"

namespace {

using namespace smpcg;

const ProbGraph& pa_graph(std::size_t n) {
  static std::vector<std::pair<std::size_t, ProbGraph>> cache;
  for (auto& [size, g] : cache) {
    if (size == n) return g;
  }
  cache.emplace_back(n, generate_preferential_attachment(n, 3, 11));
  return cache.back().second;
}

using HistogramKernel = CoverageHistogram (*)(const ProbGraph&, std::span<const NodeId>,
                                             std::span<const NodeId>, std::uint64_t,
                                             const RngStream&, SimMode);

void BM_Histogram(benchmark::State& state, HistogramKernel kernel, SimMode mode) {
  const ProbGraph& g = pa_graph(static_cast<std::size_t>(state.range(0)));
  const auto target = all_nodes(g);
  const std::vector<NodeId> seeds{0, 1, 2, 3, 4};
  const RngStream base(7);
  const std::uint64_t runs = 2000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel(g, seeds, target, runs, base, mode));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(runs));
}

// A chain-plus-fan graph with exactly `edges` edges.
ProbGraph enum_graph(std::size_t edges) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < edges; ++i) {
    const auto u = static_cast<NodeId>(i / 2);
    const auto v = static_cast<NodeId>(i + 1);
    e.push_back({u, v, 0.3 + 0.02 * static_cast<double>(i % 10)});
  }
  return ProbGraph(edges + 1, std::move(e));
}

template <auto Kernel>
void BM_Enumerate(benchmark::State& state) {
  const ProbGraph g = enum_graph(static_cast<std::size_t>(state.range(0)));
  const auto target = all_nodes(g);
  const std::vector<NodeId> seeds{0};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(g, seeds, target));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Histogram, trial_serial, kernels::coverage_histogram_serial, SimMode::trial)
    ->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Histogram, trial_omp, kernels::coverage_histogram_omp, SimMode::trial)
    ->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Histogram, live_serial, kernels::coverage_histogram_serial, SimMode::live_edge)
    ->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Histogram, live_omp, kernels::coverage_histogram_omp, SimMode::live_edge)
    ->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_TEMPLATE(BM_Enumerate, kernels::enumerate_distribution_serial)
    ->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_Enumerate, kernels::enumerate_distribution_omp)
    ->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
