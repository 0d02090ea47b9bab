#include <omp.h>

#include <algorithm>
#include <bit>

#include "smpcg/error.hpp"
#include "smpcg/estimate.hpp"

namespace smpcg::kernels {

namespace {

void validate(const ProbGraph& graph, std::span<const NodeId> seeds,
              std::span<const NodeId> target) {
  graph.require_assigned();
  for (NodeId s : seeds) {
    if (s >= graph.node_count()) throw Error(ErrorKind::range, "seed id out of range");
  }
  for (NodeId t : target) {
    if (t >= graph.node_count()) throw Error(ErrorKind::range, "target id out of range");
  }
}

std::size_t distinct_count(std::span<const NodeId> ids) {
  std::vector<NodeId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

std::size_t one_run(CascadeSimulator& sim, const ProbGraph& graph, std::span<const NodeId> seeds,
                    const RngStream& base, std::uint64_t i, SimMode mode, LiveEdgeTable& live) {
  RngStream rng = base.substream(i);
  if (mode == SimMode::trial) return sim.run_trial(seeds, rng);
  auto edges = graph.edges();
  live.resize(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) live[k] = rng.bernoulli(edges[k].prob);
  return sim.run_live(seeds, live);
}

// Bitmask view of a small graph for the 2^|E| enumeration.
struct SmallGraph {
  std::vector<std::uint32_t> src;
  std::vector<std::uint64_t> dst_bit;
  std::uint64_t seed_mask = 0;
  std::uint64_t target_mask = 0;
  std::size_t node_count = 0;
  std::size_t target_size = 0;
  unsigned low_bits = 0;
  std::vector<double> low_weight;   // product over the low half of the edges
  std::vector<double> high_weight;  // product over the high half

  std::size_t coverage(std::uint64_t config, std::uint64_t* out) const {
    std::fill(out, out + node_count, 0);
    for (std::size_t k = 0; k < src.size(); ++k) {
      if ((config >> k) & 1U) out[src[k]] |= dst_bit[k];
    }
    std::uint64_t reach = seed_mask;
    std::uint64_t frontier = seed_mask;
    while (frontier) {
      const int u = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const std::uint64_t fresh = out[u] & ~reach;
      reach |= fresh;
      frontier |= fresh;
    }
    return static_cast<std::size_t>(std::popcount(reach & target_mask));
  }

  double weight(std::uint64_t config) const {
    return low_weight[config & ((std::uint64_t{1} << low_bits) - 1)] *
           high_weight[config >> low_bits];
  }
};

std::vector<double> half_products(std::span<const Edge> edges) {
  std::vector<double> w(std::size_t{1} << edges.size());
  for (std::size_t mask = 0; mask < w.size(); ++mask) {
    double p = 1.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      p *= ((mask >> k) & 1U) ? edges[k].prob : 1.0 - edges[k].prob;
    }
    w[mask] = p;
  }
  return w;
}

SmallGraph make_small(const ProbGraph& graph, std::span<const NodeId> seeds,
                      std::span<const NodeId> target) {
  validate(graph, seeds, target);
  if (graph.edge_count() > kMaxEnumerationEdges) {
    throw Error(ErrorKind::too_large, "enumeration limited to " +
                                          std::to_string(kMaxEnumerationEdges) + " edges");
  }
  if (graph.node_count() > 64) {
    throw Error(ErrorKind::too_large, "enumeration limited to 64 nodes");
  }
  SmallGraph g;
  g.node_count = graph.node_count();
  for (const Edge& e : graph.edges()) {
    g.src.push_back(e.source);
    g.dst_bit.push_back(std::uint64_t{1} << e.target);
  }
  for (NodeId s : seeds) g.seed_mask |= std::uint64_t{1} << s;
  for (NodeId t : target) g.target_mask |= std::uint64_t{1} << t;
  g.target_size = static_cast<std::size_t>(std::popcount(g.target_mask));
  auto edges = graph.edges();
  g.low_bits = static_cast<unsigned>(edges.size() / 2);
  g.low_weight = half_products(edges.first(g.low_bits));
  g.high_weight = half_products(edges.subspan(g.low_bits));
  return g;
}

}  // namespace

CoverageHistogram coverage_histogram_serial(const ProbGraph& graph, std::span<const NodeId> seeds,
                                            std::span<const NodeId> target, std::uint64_t runs,
                                            const RngStream& base, SimMode mode) {
  validate(graph, seeds, target);
  CascadeSimulator sim(graph, target);
  CoverageHistogram h;
  h.counts.assign(distinct_count(target) + 1, 0);
  LiveEdgeTable live;
  for (std::uint64_t i = 0; i < runs; ++i) ++h.counts[one_run(sim, graph, seeds, base, i, mode, live)];
  return h;
}

CoverageHistogram coverage_histogram_omp(const ProbGraph& graph, std::span<const NodeId> seeds,
                                         std::span<const NodeId> target, std::uint64_t runs,
                                         const RngStream& base, SimMode mode) {
  validate(graph, seeds, target);
  CoverageHistogram h;
  h.counts.assign(distinct_count(target) + 1, 0);
  const auto total = static_cast<std::int64_t>(runs);
#pragma omp parallel
  {
    CascadeSimulator sim(graph, target);
    std::vector<std::uint64_t> local(h.counts.size(), 0);
    LiveEdgeTable live;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      ++local[one_run(sim, graph, seeds, base, static_cast<std::uint64_t>(i), mode, live)];
    }
#pragma omp critical(smpcg_histogram_reduce)
    for (std::size_t j = 0; j < local.size(); ++j) h.counts[j] += local[j];
  }
  return h;
}

std::vector<double> enumerate_distribution_serial(const ProbGraph& graph,
                                                  std::span<const NodeId> seeds,
                                                  std::span<const NodeId> target) {
  const SmallGraph g = make_small(graph, seeds, target);
  std::vector<double> probs(g.target_size + 1, 0.0);
  std::uint64_t out[64];
  const std::uint64_t configs = std::uint64_t{1} << g.src.size();
  for (std::uint64_t c = 0; c < configs; ++c) probs[g.coverage(c, out)] += g.weight(c);
  return probs;
}

std::vector<double> enumerate_distribution_omp(const ProbGraph& graph,
                                               std::span<const NodeId> seeds,
                                               std::span<const NodeId> target) {
  const SmallGraph g = make_small(graph, seeds, target);
  const std::size_t width = g.target_size + 1;
  const std::uint64_t configs = std::uint64_t{1} << g.src.size();
  // Fixed-size blocks summed in block order keep the result independent of
  // the thread count.
  constexpr std::uint64_t kBlock = std::uint64_t{1} << 14;
  const std::uint64_t blocks = (configs + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks * width, 0.0);
#pragma omp parallel
  {
    std::uint64_t out[64];
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      double* acc = partial.data() + static_cast<std::size_t>(b) * width;
      const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlock;
      const std::uint64_t hi = std::min(configs, lo + kBlock);
      for (std::uint64_t c = lo; c < hi; ++c) acc[g.coverage(c, out)] += g.weight(c);
    }
  }
  std::vector<double> probs(width, 0.0);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (std::size_t j = 0; j < width; ++j) probs[j] += partial[b * width + j];
  }
  return probs;
}

}  // namespace smpcg::kernels
