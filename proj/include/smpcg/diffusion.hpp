#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smpcg/graph.hpp"
#include "smpcg/rng.hpp"

namespace smpcg {

enum class Model { ic, lt };

struct CascadeOutcome {
  std::vector<NodeId> active;  // sorted
  std::size_t coverage = 0;    // |active ∩ target|
};

/// One coin per edge, flipped up front in edge-index order.
using LiveEdgeTable = std::vector<std::uint8_t>;

LiveEdgeTable sample_live_edges(const ProbGraph& graph, RngStream& rng);

/// Reusable IC simulation workspace bound to one graph and one target set.
///
/// Not thread-safe; kernels keep one per thread. The graph must outlive it.
class CascadeSimulator {
 public:
  CascadeSimulator(const ProbGraph& graph, std::span<const NodeId> target);

  /// Step-wise IC: each newly active node gets one trial per inactive
  /// out-neighbor, coins drawn on demand from `rng`. Returns |active ∩ target|.
  std::size_t run_trial(std::span<const NodeId> seeds, RngStream& rng);

  /// Coverage of the nodes reachable from `seeds` through live edges.
  std::size_t run_live(std::span<const NodeId> seeds, const LiveEdgeTable& live);

  /// Active set of the most recent run, in activation order.
  std::span<const NodeId> last_active() const noexcept { return order_; }

  std::size_t target_size() const noexcept { return target_size_; }
  bool in_target(NodeId v) const noexcept { return in_target_[v] != 0; }

 private:
  std::size_t seed_frontier(std::span<const NodeId> seeds);
  bool mark(NodeId v) noexcept;

  const ProbGraph* graph_;
  std::vector<std::uint8_t> in_target_;
  std::size_t target_size_ = 0;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> order_;
};

/// One independent-cascade run. Throws Error(invalid_graph) on unassigned
/// probabilities and Error(range) on out-of-range seeds.
CascadeOutcome simulate_ic(const ProbGraph& graph, std::span<const NodeId> seeds,
                           std::span<const NodeId> target, RngStream& rng);

/// Reachability from `seeds` in a pre-drawn live-edge realization. Coupled
/// runs (same table) are monotone in the seed set.
CascadeOutcome simulate_live(const ProbGraph& graph, std::span<const NodeId> seeds,
                             std::span<const NodeId> target, const LiveEdgeTable& live);

/// Exact probability that right node `v` is activated in one hop:
/// IC 1 - prod_{u in S}(1 - p_uv), LT sum_{u in S} p_uv.
/// Seeds that are not in-neighbors of v contribute nothing. For LT the sum of
/// all of v's in-edge weights must be <= 1 (Error(invalid_lt_weights)).
double activation_prob_one_hop(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                               NodeId v, Model model);

}  // namespace smpcg
