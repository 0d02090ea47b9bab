#include <algorithm>
#include <cmath>
#include <numeric>

#include "smpcg/error.hpp"
#include "smpcg/seedmin.hpp"

namespace smpcg {

namespace {

SeedSequence ranked(std::size_t n, SequenceMethod method,
                    const std::function<bool(NodeId, NodeId)>& before) {
  SeedSequence seq;
  seq.method = method;
  seq.order.resize(n);
  std::iota(seq.order.begin(), seq.order.end(), NodeId{0});
  std::stable_sort(seq.order.begin(), seq.order.end(), before);
  return seq;
}

}  // namespace

SeedSequence baseline_random(const ProbGraph& graph, const RngStream& rng) {
  SeedSequence seq;
  seq.method = SequenceMethod::random;
  seq.order = all_nodes(graph);
  RngStream r = rng;
  // Fisher-Yates; std::shuffle's draw pattern is implementation-defined
  for (std::size_t i = seq.order.size(); i > 1; --i) {
    std::swap(seq.order[i - 1], seq.order[r.below(i)]);
  }
  return seq;
}

SeedSequence baseline_high_degree(const ProbGraph& graph) {
  return ranked(graph.node_count(), SequenceMethod::high_degree, [&](NodeId a, NodeId b) {
    return graph.out_degree(a) > graph.out_degree(b);
  });
}

PageRankResult pagerank_scores(const ProbGraph& graph, double restart, double l1_tol,
                               std::size_t max_iters) {
  if (!(restart > 0.0 && restart < 1.0)) {
    throw Error(ErrorKind::domain, "restart probability must lie in (0,1)");
  }
  graph.require_assigned();
  const std::size_t n = graph.node_count();
  PageRankResult result;
  if (n == 0) {
    result.converged = true;
    return result;
  }
  std::vector<double> in_mass(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    for (std::uint32_t k : graph.in_edge_ids(u)) in_mass[u] += graph.edges()[k].prob;
  }
  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> x(n, uniform);
  std::vector<double> next(n);
  while (result.iterations < max_iters) {
    double dangling = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      if (!(in_mass[u] > 0.0)) dangling += x[u];
    }
    const double base = (restart + (1.0 - restart) * dangling) * uniform;
    std::fill(next.begin(), next.end(), base);
    for (NodeId u = 0; u < n; ++u) {
      if (!(in_mass[u] > 0.0)) continue;
      const double share = (1.0 - restart) * x[u] / in_mass[u];
      for (std::uint32_t k : graph.in_edge_ids(u)) {
        const Edge& e = graph.edges()[k];
        next[e.source] += share * e.prob;
      }
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += std::abs(next[i] - x[i]);
    x.swap(next);
    ++result.iterations;
    if (diff <= l1_tol) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(x);
  return result;
}

SeedSequence baseline_pagerank(const ProbGraph& graph, double restart, double l1_tol) {
  const auto pr = pagerank_scores(graph, restart, l1_tol);
  return ranked(graph.node_count(), SequenceMethod::pagerank,
                [&](NodeId a, NodeId b) { return pr.scores[a] > pr.scores[b]; });
}

}  // namespace smpcg
