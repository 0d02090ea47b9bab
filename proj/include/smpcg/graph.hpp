#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smpcg/rng.hpp"

namespace smpcg {

using NodeId = std::uint32_t;

/// Probability of an edge whose weight has not been assigned yet ("u v" lines).
inline constexpr double kUnassigned = std::numeric_limits<double>::quiet_NaN();

inline bool is_unassigned(double p) noexcept { return p != p; }

struct Edge {
  NodeId source;
  NodeId target;
  double prob;
};

/// Immutable directed graph with per-edge activation probabilities.
///
/// Edges are stored sorted by (source, target) with no duplicates and no
/// self-loops; `out_edges(u)` is a contiguous slice. Each edge also has a
/// stable index into `edges()`, which is what live-edge tables and
/// per-edge side data (multiplicities) are keyed on.
class ProbGraph {
 public:
  ProbGraph() = default;

  /// Builds from an arbitrary edge list. Duplicate (source, target) pairs are
  /// merged with noisy-or 1 - prod(1 - p_i) (unassigned if any copy is),
  /// self-loops are dropped. Throws Error(range) on ids >= n or p outside [0,1].
  ProbGraph(std::size_t n, std::vector<Edge> edges,
            std::vector<std::string> labels = {});

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Edge> out_edges(NodeId u) const noexcept {
    return {edges_.data() + out_offsets_[u],
            edges_.data() + out_offsets_[u + 1]};
  }
  /// Indices into `edges()` of the edges entering v, ascending by source.
  std::span<const std::uint32_t> in_edge_ids(NodeId v) const noexcept {
    return {in_ids_.data() + in_offsets_[v], in_ids_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_edge_offset(NodeId u) const noexcept { return out_offsets_[u]; }

  std::size_t out_degree(NodeId u) const noexcept {
    return out_offsets_[u + 1] - out_offsets_[u];
  }
  std::size_t in_degree(NodeId v) const noexcept {
    return in_offsets_[v + 1] - in_offsets_[v];
  }

  /// Index of edge (u, v) in `edges()`, if present.
  std::optional<std::size_t> find_edge(NodeId u, NodeId v) const;

  bool has_unassigned() const noexcept;
  /// Throws Error(invalid_graph) when any probability is still unassigned.
  void require_assigned() const;

  /// Same structure with new per-edge probabilities (aligned with `edges()`).
  ProbGraph with_probabilities(std::span<const double> probs) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(NodeId v) const;
  std::optional<NodeId> find_label(std::string_view label) const;

  friend bool operator==(const ProbGraph& a, const ProbGraph& b);

 private:
  void build_index();

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<std::size_t> in_offsets_{0};
  std::vector<std::uint32_t> in_ids_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
};

/// Result of reading an edge list: the graph plus ingestion bookkeeping.
struct ParsedEdgeList {
  ProbGraph graph;
  /// Number of input lines that produced each edge of `graph` (aligned with
  /// `graph.edges()`); the co-authorship count d(u,v) for collaboration data.
  std::vector<std::uint32_t> multiplicity;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

/// Parses "u v" / "u v p" lines; '#' starts a comment line. Labels are
/// remapped to dense ids in order of first appearance. With `directed` false
/// each line yields both orientations.
ParsedEdgeList parse_edge_list(std::string_view text, bool directed = true);
ParsedEdgeList load_edge_list(const std::string& path, bool directed = true);

/// Writes "u v p" lines using labels; probabilities are printed in shortest
/// round-trip form so re-parsing reproduces them bit for bit. Unassigned
/// edges are written as "u v".
void write_edge_list(const ProbGraph& graph, std::ostream& out);

/// p(u, v) = 1 / in_degree(v).
ProbGraph assign_weighted_cascade(const ProbGraph& graph);

/// p(u, v) = multiplicity(u, v) / volume(v). `multiplicity` is aligned with
/// `graph.edges()`, `volume` is indexed by NodeId.
ProbGraph assign_collaboration_weights(const ProbGraph& graph,
                                       std::span<const std::uint32_t> multiplicity,
                                       std::span<const std::uint64_t> volume);

/// Target set from text: one label per line, or the single token "ALL".
/// Returns sorted, de-duplicated ids. Unknown labels are a parse error.
std::vector<NodeId> parse_target_spec(std::string_view text, const ProbGraph& graph);
std::vector<NodeId> load_target_spec(const std::string& path, const ProbGraph& graph);

std::vector<NodeId> all_nodes(const ProbGraph& graph);

/// One-way bipartite view: every edge goes from `left` to `right`.
///
/// Right nodes are indexed 0..m-1 in ascending NodeId order; that order is
/// the v_1..v_m order used by the coverage dynamic program.
class BipartiteGraph {
 public:
  struct InEdge {
    NodeId source;
    double prob;
  };
  struct OutEdge {
    std::uint32_t right_index;
    double prob;
  };

  std::size_t node_count() const noexcept { return side_.size(); }
  std::size_t right_count() const noexcept { return right_.size(); }
  const std::vector<NodeId>& left() const noexcept { return left_; }
  const std::vector<NodeId>& right() const noexcept { return right_; }

  bool is_left(NodeId v) const noexcept { return side_[v] == 0; }
  bool is_right(NodeId v) const noexcept { return side_[v] == 1; }
  /// Position of a right node in v_1..v_m (0-based); -1 for left nodes.
  std::int64_t right_index(NodeId v) const noexcept { return right_pos_[v]; }

  std::span<const InEdge> in_edges(std::size_t right_index) const noexcept {
    return in_[right_index];
  }
  std::span<const OutEdge> out_edges(NodeId left_node) const noexcept {
    return out_[left_node];
  }

  double min_edge_prob() const noexcept;

  friend BipartiteGraph as_bipartite(const ProbGraph& graph);

 private:
  std::vector<NodeId> left_;
  std::vector<NodeId> right_;
  std::vector<std::int8_t> side_;
  std::vector<std::int64_t> right_pos_;
  std::vector<std::vector<InEdge>> in_;
  std::vector<std::vector<OutEdge>> out_;
};

/// Partitions nodes into V1 (out-edges or isolated) and V2 (in-edges).
/// Throws Error(not_bipartite) if a node has both; Error(invalid_graph) if
/// probabilities are unassigned.
BipartiteGraph as_bipartite(const ProbGraph& graph);

/// Test/fixture helper: left nodes get ids 0..left-1, right nodes
/// left..left+right-1; edges are (left index, right index, prob).
struct BipartiteEdge {
  std::uint32_t left;
  std::uint32_t right;
  double prob;
};
ProbGraph make_bipartite_graph(std::size_t left, std::size_t right,
                               std::span<const BipartiteEdge> edges);

/// Undirected preferential attachment (each new node links to
/// `edges_per_node` distinct existing nodes chosen proportionally to degree
/// + 1), emitted in both orientations and weighted by weighted cascade.
/// Fully determined by (n, edges_per_node, seed).
ProbGraph generate_preferential_attachment(std::size_t n, std::size_t edges_per_node,
                                           std::uint64_t seed);

}  // namespace smpcg
