#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smpcg/bipartite.hpp"
#include "smpcg/error.hpp"
#include "smpcg/graph.hpp"
#include "smpcg/seedmin.hpp"

namespace smpcg {

enum class Weighting { given, weighted_cascade, collaboration };
enum class Evaluator { monte_carlo, exact_bipartite };

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitParse = 3,
  kExitInfeasible = 4,
  kExitInternal = 5,
};

int exit_code_for(ErrorKind kind);

struct RunConfig {
  std::string graph_path;
  bool undirected = false;
  Weighting weighting = Weighting::given;
  /// Collaboration weighting: "label count" lines giving d(v). Without it
  /// d(v) is the total multiplicity of v's incoming edges.
  std::string volume_path;
  /// "ALL" or a path to a target file.
  std::string target = "ALL";
  std::size_t eta = 0;
  double p_threshold = 0.5;
  double eps = 0.01;
  std::uint64_t runs = 10000;
  std::uint64_t seed = 1;
  std::vector<SequenceMethod> methods{SequenceMethod::greedy};
  Evaluator evaluator = Evaluator::monte_carlo;
  SearchMode search = SearchMode::linear;
  Model model = Model::ic;
  std::size_t greedy_samples = 200;
  /// Cap on generated sequence length; 0 = all nodes.
  std::size_t max_seeds = 0;
  std::size_t jobs = 1;
  bool timing = false;
};

/// Every violated constraint, in a fixed order. `needs_eta` is false for
/// commands that take their thresholds from a list.
std::vector<std::string> validate_config(const RunConfig& config, bool needs_eta = true);

/// Graph, target set and (when the evaluator needs it) the bipartite view.
struct Problem {
  ProbGraph graph;
  std::vector<NodeId> target;
  std::optional<BipartiteGraph> bipartite;
};

/// Reads and weights the graph, resolves the target set. Throws Error.
Problem load_problem(const RunConfig& config);

/// Wraps an in-memory graph; builds the bipartite view for exact_bipartite.
Problem make_problem(ProbGraph graph, std::vector<NodeId> target, Evaluator evaluator);

SeedSequence build_sequence(const Problem& problem, const RunConfig& config,
                            SequenceMethod method);

CompProb build_comp_prob(const Problem& problem, const RunConfig& config, std::size_t eta);

/// CSV: method,seed_count,achieved_prob,seeds[,wall_ms]. Returns an ExitCode.
int cmd_solve(const Problem& problem, const RunConfig& config, std::ostream& out);

/// CSV: eta,method,seed_size ("NA" where infeasible).
int cmd_sweep_eta(const Problem& problem, const RunConfig& config,
                  std::span<const std::size_t> etas, std::ostream& out);

/// CSV: size,method,prob for each prefix size of each method's sequence.
int cmd_phase_transition(const Problem& problem, const RunConfig& config,
                         std::span<const std::size_t> sizes, std::ostream& out);

/// CSV: size,which,mean,stddev with which in {greedy, random-max}.
int cmd_stats(const Problem& problem, const RunConfig& config, std::span<const std::size_t> sizes,
              std::size_t random_sets_per_size, std::ostream& out);

/// CSV: j,prob,tail over the final DP row, or i,j,prob over the whole table.
int cmd_exact_dp(const Problem& problem, const RunConfig& config,
                 std::span<const NodeId> seeds, bool full_table, std::ostream& out);

/// CSV: j,prob,tail from the 2^|E| enumeration.
int cmd_oracle(const Problem& problem, std::span<const NodeId> seeds, std::ostream& out);

/// Resolves comma-separated labels against the graph (Error(parse) on unknown).
std::vector<NodeId> resolve_labels(const ProbGraph& graph, std::string_view csv);

}  // namespace smpcg
