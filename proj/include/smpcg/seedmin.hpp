#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smpcg/bipartite.hpp"
#include "smpcg/diffusion.hpp"
#include "smpcg/graph.hpp"
#include "smpcg/rng.hpp"

namespace smpcg {

enum class SequenceMethod { greedy, random, high_degree, pagerank };

std::string to_string(SequenceMethod method);
std::optional<SequenceMethod> parse_sequence_method(std::string_view name);

/// Ordered seed candidates; prefix k is the candidate seed set S_k.
struct SeedSequence {
  std::vector<NodeId> order;
  /// Estimated marginal expected-coverage gain of each position (greedy only;
  /// empty for the baselines).
  std::vector<double> gains;
  SequenceMethod method = SequenceMethod::greedy;
  /// Prefix length at which an expected-coverage stop fired, if requested.
  std::optional<std::size_t> stop_index;

  std::span<const NodeId> prefix(std::size_t k) const {
    return std::span<const NodeId>(order).first(k);
  }
};

/// Expected coverage E[Inf(S)] as an incrementally grown set function.
class CoverageOracle {
 public:
  virtual ~CoverageOracle() = default;

  virtual std::size_t node_count() const = 0;
  /// E[Inf(S)] for the current seed set S.
  virtual double value() const = 0;
  /// E[Inf(S ∪ {v})] - E[Inf(S)]; zero for current seeds.
  virtual double marginal_gain(NodeId v) = 0;
  virtual void add_seed(NodeId v) = 0;
};

/// Sample-average estimate over a fixed batch of live-edge realizations.
///
/// Every evaluation reuses the same batch (common random numbers), which makes
/// the estimate itself a monotone submodular coverage function: the lazy and
/// plain greedy then pick identical sequences. Marginals are evaluated with
/// OpenMP over the batch; results are integer counts, so they do not depend
/// on the thread count.
class SampledCoverageOracle final : public CoverageOracle {
 public:
  SampledCoverageOracle(const ProbGraph& graph, std::span<const NodeId> target,
                        std::size_t samples, const RngStream& rng);
  ~SampledCoverageOracle() override;

  std::size_t node_count() const override;
  double value() const override;
  double marginal_gain(NodeId v) override;
  void add_seed(NodeId v) override;

  /// Raw count behind marginal_gain: newly covered target nodes summed over samples.
  std::uint64_t marginal_count(NodeId v);
  std::size_t samples() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Closed-form expected coverage on a one-way bipartite graph for an
/// arbitrary target set (see target_activation_probs).
class ExactBipartiteOracle final : public CoverageOracle {
 public:
  ExactBipartiteOracle(const BipartiteGraph& graph, std::span<const NodeId> target,
                       Model model = Model::ic);

  std::size_t node_count() const override { return graph_->node_count(); }
  double value() const override;
  double marginal_gain(NodeId v) override;
  void add_seed(NodeId v) override;

 private:
  double gain_for(NodeId v) const;

  const BipartiteGraph* graph_;
  Model model_;
  std::vector<std::uint8_t> seeded_;
  std::vector<std::uint8_t> targeted_;
  std::vector<double> right_prob_;  // p(S ∩ V1, v) per right index
};

struct GreedyConfig {
  /// Live-edge samples behind each expected-coverage estimate.
  std::size_t samples = 200;
  /// Coverage threshold for the expected-coverage stop.
  std::size_t eta = 0;
  /// Stop at the first prefix whose estimate reaches inflation * eta
  /// (the (1 + gamma) factor). Only used when stop_at_eta is set.
  double inflation = 1.0;
  bool stop_at_eta = false;
  bool lazy = true;
  /// Maximum sequence length; 0 means all n nodes.
  std::size_t max_length = 0;
};

/// Greedy by largest marginal expected-coverage gain, ties to the lowest id.
SeedSequence greedy_ecg(CoverageOracle& oracle, const GreedyConfig& config);

/// Greedy over a SampledCoverageOracle built from `rng`.
SeedSequence greedy_ecg(const ProbGraph& graph, std::span<const NodeId> target,
                        const GreedyConfig& config, const RngStream& rng);

/// Pr(Inf(S) >= eta) for a candidate seed set.
struct CompProb {
  std::function<double(std::span<const NodeId>)> eval;
  bool exact = false;
  std::uint64_t runs = 0;  // Monte Carlo runs per evaluation, 0 when exact
};

/// MC-CompProb[R]. The prefix of size k uses `rng.substream(k)`, so a prefix
/// gets the same estimate whichever search visits it.
CompProb monte_carlo_comp_prob(const ProbGraph& graph, std::span<const NodeId> target,
                               std::size_t eta, std::uint64_t runs, const RngStream& rng);

/// Exact tail via the Poisson-binomial DP over target activation probabilities.
CompProb exact_bipartite_comp_prob(const BipartiteGraph& graph, std::span<const NodeId> target,
                                   std::size_t eta, Model model = Model::ic);

enum class SearchMode { linear, binary };

/// Smallest k in [1, length] with predicate(k). Binary mode assumes the
/// predicate is monotone in k. Error(not_found) if none qualifies.
std::size_t prefix_search(std::size_t length, const std::function<bool(std::size_t)>& predicate,
                          SearchMode mode = SearchMode::linear);

struct PcgInstance {
  const ProbGraph* graph = nullptr;
  std::vector<NodeId> target;
  std::size_t eta = 0;
  double p_threshold = 0.5;
  /// Admits eta = |U| (full coverage); only valid with an exact bipartite evaluator.
  bool allow_full_coverage = false;

  /// Throws Error(domain) on violated preconditions.
  void validate() const;
};

struct PcgSolution {
  std::vector<NodeId> seeds;  // prefix of the sequence, in sequence order
  double achieved_prob = 0.0;
  std::uint64_t estimator_runs = 0;
  double eps = 0.0;
  SequenceMethod sequence_method = SequenceMethod::greedy;
};

/// MinSeed-PCG[eps] over a precomputed sequence: the shortest prefix whose
/// evaluated probability is at least P + eps. An exact evaluator forces
/// eps = 0. Error(infeasible) reports the best probability seen.
PcgSolution min_seed_pcg(const PcgInstance& instance, double eps, const SeedSequence& sequence,
                         const CompProb& comp_prob, SearchMode mode = SearchMode::linear);

SeedSequence baseline_random(const ProbGraph& graph, const RngStream& rng);
SeedSequence baseline_high_degree(const ProbGraph& graph);

struct PageRankResult {
  std::vector<double> scores;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Power iteration where a walker at u moves to in-neighbor v with
/// probability p_{v,u} / sum_{(w,u)} p_{w,u}, restarting uniformly with
/// probability `restart`. Nodes with zero incoming probability mass jump
/// uniformly. Stops when consecutive iterates differ by <= l1_tol in L1.
PageRankResult pagerank_scores(const ProbGraph& graph, double restart = 0.15,
                               double l1_tol = 1e-4, std::size_t max_iters = 1000);

SeedSequence baseline_pagerank(const ProbGraph& graph, double restart = 0.15,
                               double l1_tol = 1e-4);

}  // namespace smpcg
