#include "smpcg/bipartite.hpp"

#include <algorithm>
#include <cmath>

#include "smpcg/error.hpp"

namespace smpcg {

namespace {

std::vector<std::uint8_t> seed_mask(const BipartiteGraph& graph, std::span<const NodeId> seeds) {
  std::vector<std::uint8_t> mask(graph.node_count(), 0);
  for (NodeId s : seeds) {
    if (s >= graph.node_count()) throw Error(ErrorKind::range, "seed id out of range");
    mask[s] = 1;
  }
  return mask;
}

void require_left(const BipartiteGraph& graph, std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= graph.node_count()) throw Error(ErrorKind::range, "seed id out of range");
    if (!graph.is_left(s)) {
      throw Error(ErrorKind::domain, "seed " + std::to_string(s) + " is not a left-side node");
    }
  }
}

void check_lt(const BipartiteGraph& graph) {
  for (std::size_t r = 0; r < graph.right_count(); ++r) {
    double total = 0.0;
    for (const auto& e : graph.in_edges(r)) total += e.prob;
    if (total > 1.0 + 1e-12) {
      throw Error(ErrorKind::invalid_lt_weights,
                  "LT in-weights of right node " + std::to_string(graph.right()[r]) +
                      " sum above 1");
    }
  }
}

double node_activation(const BipartiteGraph& graph, std::size_t r,
                       const std::vector<std::uint8_t>& mask, Model model) {
  if (model == Model::lt) {
    double sum = 0.0;
    for (const auto& e : graph.in_edges(r)) {
      if (mask[e.source]) sum += e.prob;
    }
    return std::min(sum, 1.0);
  }
  double miss = 1.0;
  for (const auto& e : graph.in_edges(r)) {
    if (mask[e.source]) miss *= 1.0 - e.prob;
  }
  return 1.0 - miss;
}

// p(S ∪ {w}, v) given p(S, v), for an edge (w, v) of weight q.
double raise(double current, double q, Model model) {
  if (model == Model::lt) return std::min(current + q, 1.0);
  return 1.0 - (1.0 - current) * (1.0 - q);
}

}  // namespace

DpTable::DpTable(std::span<const double> activation)
    : m_(activation.size()), cells_((m_ + 1) * (m_ + 2) / 2, 0.0) {
  cells_[0] = 1.0;
  for (std::size_t i = 1; i <= m_; ++i) {
    const double p = activation[i - 1];
    const double* prev = cells_.data() + (i - 1) * i / 2;
    double* cur = cells_.data() + i * (i + 1) / 2;
    cur[0] = prev[0] * (1.0 - p);
    for (std::size_t j = 1; j < i; ++j) cur[j] = prev[j] * (1.0 - p) + prev[j - 1] * p;
    cur[i] = prev[i - 1] * p;
  }
}

double DpTable::at(std::size_t i, std::size_t j) const {
  if (i > m_) throw Error(ErrorKind::range, "DP row out of range");
  if (j > i) return 0.0;
  return cells_[i * (i + 1) / 2 + j];
}

std::span<const double> DpTable::row(std::size_t i) const {
  if (i > m_) throw Error(ErrorKind::range, "DP row out of range");
  return {cells_.data() + i * (i + 1) / 2, i + 1};
}

double DpTable::tail(std::size_t eta) const {
  if (eta > m_) throw Error(ErrorKind::domain, "eta exceeds the number of right nodes");
  if (eta == 0) return 1.0;
  auto last = row(m_);
  double t = 0.0;
  for (std::size_t j = m_ + 1; j-- > eta;) t += last[j];
  return t;
}

std::vector<double> coverage_distribution(std::span<const double> activation) {
  std::vector<double> row(activation.size() + 1, 0.0);
  row[0] = 1.0;
  for (std::size_t i = 1; i <= activation.size(); ++i) {
    const double p = activation[i - 1];
    row[i] = row[i - 1] * p;
    for (std::size_t j = i - 1; j > 0; --j) row[j] = row[j] * (1.0 - p) + row[j - 1] * p;
    row[0] *= 1.0 - p;
  }
  return row;
}

double coverage_tail(std::span<const double> activation, std::size_t eta) {
  if (eta > activation.size()) throw Error(ErrorKind::domain, "eta exceeds target size");
  if (eta == 0) return 1.0;
  const auto row = coverage_distribution(activation);
  double t = 0.0;
  for (std::size_t j = row.size(); j-- > eta;) t += row[j];
  return t;
}

std::vector<double> activation_probs(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                                     Model model) {
  require_left(graph, seeds);
  if (model == Model::lt) check_lt(graph);
  const auto mask = seed_mask(graph, seeds);
  std::vector<double> probs(graph.right_count());
  for (std::size_t r = 0; r < probs.size(); ++r) probs[r] = node_activation(graph, r, mask, model);
  return probs;
}

std::vector<double> target_activation_probs(const BipartiteGraph& graph,
                                            std::span<const NodeId> seeds,
                                            std::span<const NodeId> target, Model model) {
  if (model == Model::lt) check_lt(graph);
  const auto mask = seed_mask(graph, seeds);
  std::vector<double> probs;
  probs.reserve(target.size());
  for (NodeId t : target) {
    if (t >= graph.node_count()) throw Error(ErrorKind::range, "target id out of range");
    if (mask[t]) {
      probs.push_back(1.0);
    } else if (graph.is_right(t)) {
      probs.push_back(
          node_activation(graph, static_cast<std::size_t>(graph.right_index(t)), mask, model));
    } else {
      probs.push_back(0.0);
    }
  }
  return probs;
}

DpTable build_dp(const BipartiteGraph& graph, std::span<const NodeId> seeds, Model model) {
  return DpTable(activation_probs(graph, seeds, model));
}

double bi_comp_prob(const BipartiteGraph& graph, std::span<const NodeId> seeds, std::size_t eta,
                    Model model) {
  if (eta > graph.right_count()) {
    throw Error(ErrorKind::domain, "eta exceeds the number of right nodes");
  }
  return coverage_tail(activation_probs(graph, seeds, model), eta);
}

double expected_coverage_exact(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                               Model model) {
  double sum = 0.0;
  for (double p : activation_probs(graph, seeds, model)) sum += p;
  return sum;
}

double full_coverage_prob(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                          Model model) {
  double prod = 1.0;
  for (double p : activation_probs(graph, seeds, model)) prod *= p;
  return prod;
}

std::size_t max_coverage_at_confidence(std::span<const double> activation, double p_threshold) {
  const auto row = coverage_distribution(activation);
  // walk the tail down from the top; eta' = 0 always qualifies
  double tail = 0.0;
  for (std::size_t j = row.size(); j-- > 1;) {
    tail += row[j];
    if (tail >= p_threshold) return j;
  }
  return 0;
}

std::vector<NodeId> greedy_set_cover(const BipartiteGraph& graph) {
  const std::size_t m = graph.right_count();
  for (std::size_t r = 0; r < m; ++r) {
    if (graph.in_edges(r).empty()) {
      throw InfeasibleError("right node " + std::to_string(graph.right()[r]) + " has no in-edge",
                            0.0);
    }
  }
  std::vector<std::uint8_t> covered(m, 0);
  std::vector<std::uint8_t> chosen(graph.node_count(), 0);
  std::size_t remaining = m;
  std::vector<NodeId> cover;
  while (remaining > 0) {
    NodeId best = 0;
    std::size_t best_gain = 0;
    for (NodeId w : graph.left()) {
      if (chosen[w]) continue;
      std::size_t gain = 0;
      for (const auto& e : graph.out_edges(w)) gain += covered[e.right_index] == 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = w;
      }
    }
    chosen[best] = 1;
    cover.push_back(best);
    for (const auto& e : graph.out_edges(best)) {
      if (!covered[e.right_index]) {
        covered[e.right_index] = 1;
        --remaining;
      }
    }
  }
  return cover;
}

double g_value(const BipartiteGraph& graph, std::span<const NodeId> s1,
               std::span<const NodeId> x, Model model) {
  require_left(graph, s1);
  require_left(graph, x);
  const auto base_mask = seed_mask(graph, s1);
  for (NodeId v : x) {
    if (base_mask[v]) throw Error(ErrorKind::domain, "X must be disjoint from S1");
  }
  if (model == Model::lt) check_lt(graph);
  auto joint_mask = base_mask;
  for (NodeId v : x) joint_mask[v] = 1;
  double g = 0.0;
  for (std::size_t r = 0; r < graph.right_count(); ++r) {
    const double before = node_activation(graph, r, base_mask, model);
    if (!(before > 0.0)) {
      throw Error(ErrorKind::log_domain, "p(S1, v) = 0 for right node " +
                                             std::to_string(graph.right()[r]));
    }
    g += std::log(node_activation(graph, r, joint_mask, model)) - std::log(before);
  }
  return g;
}

std::vector<NodeId> TwoStageResult::seeds() const {
  std::vector<NodeId> all = s1;
  all.insert(all.end(), s2.begin(), s2.end());
  std::sort(all.begin(), all.end());
  return all;
}

TwoStageResult two_stage_full_coverage(const BipartiteGraph& graph, double p_threshold,
                                       Model model, StageTwoStop stop) {
  if (!(p_threshold > 0.0 && p_threshold < 1.0)) {
    throw Error(ErrorKind::domain, "probability threshold must lie in (0,1)");
  }
  for (std::size_t r = 0; r < graph.right_count(); ++r) {
    for (const auto& e : graph.in_edges(r)) {
      if (!(e.prob > 0.0)) {
        throw Error(ErrorKind::domain, "two-stage selection needs edge probabilities in (0,1]");
      }
    }
  }
  if (model == Model::lt) check_lt(graph);
  const double reachable = full_coverage_prob(graph, graph.left(), model);
  if (reachable < p_threshold) {
    throw InfeasibleError("full coverage probability with every left node seeded is below P",
                          reachable);
  }

  TwoStageResult result;
  result.s1 = greedy_set_cover(graph);
  std::vector<std::uint8_t> in_seed(graph.node_count(), 0);
  for (NodeId s : result.s1) in_seed[s] = 1;

  std::vector<double> current(graph.right_count());
  for (std::size_t r = 0; r < current.size(); ++r) {
    current[r] = node_activation(graph, r, in_seed, model);
  }
  auto product = [&] {
    double prod = 1.0;
    for (double p : current) prod *= p;
    return prod;
  };
  auto gain_of = [&](NodeId w) {
    double gain = 0.0;
    for (const auto& e : graph.out_edges(w)) {
      gain += std::log(raise(current[e.right_index], e.prob, model)) -
              std::log(current[e.right_index]);
    }
    return gain;
  };
  auto add = [&](NodeId w) {
    in_seed[w] = 1;
    result.s2.push_back(w);
    // recomputed from the seed mask so success_prob matches a fresh evaluation bit for bit
    for (const auto& e : graph.out_edges(w)) {
      current[e.right_index] = node_activation(graph, e.right_index, in_seed, model);
    }
  };

  const double m = static_cast<double>(graph.right_count());
  const double log_target = std::log(p_threshold);
  // relaxed mode: stop once log f(S1 ∪ S2) >= log P - (-log P / m)
  const double slack = stop == StageTwoStop::relaxed && m > 0 ? -log_target / m : 0.0;
  auto log_f = [&] {
    double s = 0.0;
    for (double p : current) s += std::log(p);
    return s;
  };

  while (product() < p_threshold && log_f() < log_target - slack) {
    NodeId best = 0;
    double best_gain = 0.0;
    bool found = false;
    for (NodeId w : graph.left()) {
      if (in_seed[w]) continue;
      const double gain = gain_of(w);
      if (gain > best_gain) {
        best_gain = gain;
        best = w;
        found = true;
      }
    }
    if (!found) break;
    add(best);
  }

  // Fallback: raise the least likely right node through its best remaining
  // in-neighbor (most g gain, then lowest id) until the target is met. Right
  // nodes whose in-neighbors are all seeded are already as high as they go.
  auto raisable = [&](std::size_t r) {
    for (const auto& e : graph.in_edges(r)) {
      if (!in_seed[e.source]) return true;
    }
    return false;
  };
  while (product() < p_threshold) {
    std::size_t weakest = current.size();
    for (std::size_t r = 0; r < current.size(); ++r) {
      if (raisable(r) && (weakest == current.size() || current[r] < current[weakest])) weakest = r;
    }
    if (weakest == current.size()) {
      throw InfeasibleError("stage two exhausted candidates below P", product());
    }
    NodeId best = 0;
    double best_gain = -1.0;
    for (const auto& e : graph.in_edges(weakest)) {
      if (in_seed[e.source]) continue;
      const double gain = gain_of(e.source);
      if (gain > best_gain || (gain == best_gain && e.source < best)) {
        best_gain = gain;
        best = e.source;
      }
    }
    add(best);
    ++result.fallback_additions;
  }
  result.success_prob = product();
  return result;
}

}  // namespace smpcg
