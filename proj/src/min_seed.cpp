#include <algorithm>
#include <cmath>
#include <map>

#include "smpcg/error.hpp"
#include "smpcg/estimate.hpp"
#include "smpcg/seedmin.hpp"

namespace smpcg {

CompProb monte_carlo_comp_prob(const ProbGraph& graph, std::span<const NodeId> target,
                               std::size_t eta, std::uint64_t runs, const RngStream& rng) {
  if (runs == 0) throw Error(ErrorKind::domain, "Monte Carlo evaluator needs R >= 1");
  graph.require_assigned();
  std::vector<NodeId> u(target.begin(), target.end());
  CompProb cp;
  cp.exact = false;
  cp.runs = runs;
  cp.eval = [&graph, u = std::move(u), eta, runs, rng](std::span<const NodeId> seeds) {
    return mc_comp_prob(graph, u, seeds, eta, runs, rng.substream(seeds.size()));
  };
  return cp;
}

CompProb exact_bipartite_comp_prob(const BipartiteGraph& graph, std::span<const NodeId> target,
                                   std::size_t eta, Model model) {
  if (eta > target.size()) throw Error(ErrorKind::domain, "eta exceeds target size");
  std::vector<NodeId> u(target.begin(), target.end());
  CompProb cp;
  cp.exact = true;
  cp.eval = [&graph, u = std::move(u), eta, model](std::span<const NodeId> seeds) {
    return coverage_tail(target_activation_probs(graph, seeds, u, model), eta);
  };
  return cp;
}

std::size_t prefix_search(std::size_t length, const std::function<bool(std::size_t)>& predicate,
                          SearchMode mode) {
  if (mode == SearchMode::linear) {
    for (std::size_t k = 1; k <= length; ++k) {
      if (predicate(k)) return k;
    }
    throw Error(ErrorKind::not_found, "no prefix satisfies the predicate");
  }
  if (length == 0 || !predicate(length)) {
    throw Error(ErrorKind::not_found, "no prefix satisfies the predicate");
  }
  std::size_t lo = 1;  // invariant: answer in [lo, hi], predicate(hi) holds
  std::size_t hi = length;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (predicate(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

void PcgInstance::validate() const {
  if (graph == nullptr) throw Error(ErrorKind::domain, "instance has no graph");
  if (!(p_threshold > 0.0 && p_threshold < 1.0)) {
    throw Error(ErrorKind::domain, "probability threshold P must lie in (0,1)");
  }
  if (target.empty()) throw Error(ErrorKind::domain, "target set is empty");
  for (NodeId t : target) {
    if (t >= graph->node_count()) throw Error(ErrorKind::domain, "target node out of range");
  }
  if (eta == 0) throw Error(ErrorKind::domain, "coverage threshold eta must be positive");
  if (eta > target.size() || (eta == target.size() && !allow_full_coverage)) {
    throw Error(ErrorKind::domain,
                "eta must be below |U| (eta = |U| only on the bipartite full-coverage path)");
  }
}

PcgSolution min_seed_pcg(const PcgInstance& instance, double eps, const SeedSequence& sequence,
                         const CompProb& comp_prob, SearchMode mode) {
  instance.validate();
  if (instance.allow_full_coverage && instance.eta == instance.target.size() && !comp_prob.exact) {
    throw Error(ErrorKind::domain, "eta = |U| needs the exact bipartite evaluator");
  }
  if (comp_prob.exact) eps = 0.0;
  if (!(eps >= 0.0 && eps < (1.0 - instance.p_threshold) / 2.0)) {
    throw Error(ErrorKind::domain, "eps must lie in [0, (1-P)/2)");
  }
  const double threshold = instance.p_threshold + eps;

  std::map<std::size_t, double> memo;
  double best = 0.0;
  auto prob_at = [&](std::size_t k) {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    const double p = comp_prob.eval(sequence.prefix(k));
    memo.emplace(k, p);
    best = std::max(best, p);
    return p;
  };

  std::size_t k = 0;
  try {
    k = prefix_search(sequence.order.size(),
                      [&](std::size_t i) { return prob_at(i) >= threshold; }, mode);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_found) throw;
    throw InfeasibleError("no prefix of the " + to_string(sequence.method) +
                              " sequence reaches P + eps",
                          best);
  }
  PcgSolution sol;
  auto pre = sequence.prefix(k);
  sol.seeds.assign(pre.begin(), pre.end());
  sol.achieved_prob = memo.at(k);
  sol.estimator_runs = comp_prob.runs;
  sol.eps = eps;
  sol.sequence_method = sequence.method;
  return sol;
}

}  // namespace smpcg
