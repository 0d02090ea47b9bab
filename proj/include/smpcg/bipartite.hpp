#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smpcg/diffusion.hpp"
#include "smpcg/graph.hpp"

namespace smpcg {

/// A(S, i, j): probability that exactly j of the first i right nodes are
/// active, for 0 <= j <= i <= m. Row 0 is the empty prefix {1}.
///
/// Because right-node activations are independent in a one-way bipartite
/// graph, row m is the Poisson-binomial distribution of the per-node
/// activation probabilities.
class DpTable {
 public:
  explicit DpTable(std::span<const double> activation);

  std::size_t size() const noexcept { return m_; }
  double at(std::size_t i, std::size_t j) const;
  std::span<const double> row(std::size_t i) const;
  /// sum_{j >= eta} A(S, m, j)
  double tail(std::size_t eta) const;

 private:
  std::size_t m_;
  std::vector<double> cells_;  // row i starts at i(i+1)/2
};

/// Final DP row only, O(m) memory.
std::vector<double> coverage_distribution(std::span<const double> activation);
/// Pr(#active >= eta) from independent activation probabilities.
double coverage_tail(std::span<const double> activation, std::size_t eta);

/// p(S, v) for each right node v_1..v_m. Seeds must be left nodes
/// (Error(domain) otherwise).
std::vector<double> activation_probs(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                                     Model model);

/// Activation probability of each node of an arbitrary target set under
/// seed set S drawn from all of V: a seed is active with probability 1, a
/// right node with p(S ∩ V1, v), a non-seed left node never.
std::vector<double> target_activation_probs(const BipartiteGraph& graph,
                                            std::span<const NodeId> seeds,
                                            std::span<const NodeId> target, Model model);

DpTable build_dp(const BipartiteGraph& graph, std::span<const NodeId> seeds, Model model);

/// Exact Pr(Inf(S) >= eta) with U = V2. Error(domain) when eta > m.
double bi_comp_prob(const BipartiteGraph& graph, std::span<const NodeId> seeds, std::size_t eta,
                    Model model = Model::ic);

/// E[Inf(S)] = sum_v p(S, v) with U = V2.
double expected_coverage_exact(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                               Model model = Model::ic);

/// prod_v p(S, v): probability that every right node is active.
double full_coverage_prob(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                          Model model = Model::ic);

/// Largest eta' with Pr(#active >= eta') >= p_threshold (the coverage a seed
/// set guarantees at confidence p_threshold).
std::size_t max_coverage_at_confidence(std::span<const double> activation, double p_threshold);

/// Greedy set cover of V2 by left-node neighborhoods, ties to the lowest id.
/// Error(infeasible) if some right node has no in-edge.
std::vector<NodeId> greedy_set_cover(const BipartiteGraph& graph);

/// g_{S1}(X) = sum_v [log p(S1 ∪ X, v) - log p(S1, v)], natural logs.
/// Error(log_domain) if p(S1, v) = 0 for some v; Error(domain) if S1 or X
/// contain right nodes or intersect.
double g_value(const BipartiteGraph& graph, std::span<const NodeId> s1,
               std::span<const NodeId> x, Model model = Model::ic);

enum class StageTwoStop {
  exact,    // greedy on g until the full-coverage probability reaches P
  relaxed,  // stop within -log(P)/m of the target, then apply the fallback
};

struct TwoStageResult {
  std::vector<NodeId> s1;
  std::vector<NodeId> s2;  // in selection order
  double success_prob = 0.0;
  std::size_t fallback_additions = 0;

  std::vector<NodeId> seeds() const;
};

/// Two-stage full-coverage seed selection: greedy set cover, then greedy on
/// g_{S1} until prod_v p(S1 ∪ S2, v) >= P. All edge probabilities must lie
/// in (0, 1]. Error(infeasible) when even S = V1 falls short of P.
TwoStageResult two_stage_full_coverage(const BipartiteGraph& graph, double p_threshold,
                                       Model model = Model::ic,
                                       StageTwoStop stop = StageTwoStop::exact);

}  // namespace smpcg
