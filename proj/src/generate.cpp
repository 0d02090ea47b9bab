#include <algorithm>

#include "smpcg/error.hpp"
#include "smpcg/graph.hpp"

namespace smpcg {

ProbGraph generate_preferential_attachment(std::size_t n, std::size_t edges_per_node,
                                           std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::domain, "generator needs n >= 1");
  if (edges_per_node == 0) throw Error(ErrorKind::domain, "generator needs edges_per_node >= 1");

  RngStream rng(seed, 0x6e6e);
  // Each node appears once for the +1 smoothing and once per incident edge.
  std::vector<NodeId> urn;
  urn.reserve(n * (2 * edges_per_node + 1));
  std::vector<Edge> edges;
  edges.reserve(2 * n * edges_per_node);
  std::vector<NodeId> picked;

  urn.push_back(0);
  for (NodeId t = 1; t < n; ++t) {
    const std::size_t want = std::min<std::size_t>(t, edges_per_node);
    picked.clear();
    while (picked.size() < want) {
      NodeId c = urn[rng.below(urn.size())];
      if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
    }
    for (NodeId c : picked) {
      edges.push_back({c, t, kUnassigned});
      edges.push_back({t, c, kUnassigned});
      urn.push_back(c);
      urn.push_back(t);
    }
    urn.push_back(t);
  }
  return assign_weighted_cascade(ProbGraph(n, std::move(edges)));
}

}  // namespace smpcg
