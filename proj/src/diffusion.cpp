#include "smpcg/diffusion.hpp"

#include <algorithm>

#include "smpcg/error.hpp"

namespace smpcg {

namespace {

void check_seeds(const ProbGraph& graph, std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= graph.node_count()) throw Error(ErrorKind::range, "seed id out of range");
  }
}

}  // namespace

LiveEdgeTable sample_live_edges(const ProbGraph& graph, RngStream& rng) {
  LiveEdgeTable live(graph.edge_count());
  auto edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) live[k] = rng.bernoulli(edges[k].prob);
  return live;
}

CascadeSimulator::CascadeSimulator(const ProbGraph& graph, std::span<const NodeId> target)
    : graph_(&graph), in_target_(graph.node_count(), 0), stamp_(graph.node_count(), 0) {
  graph.require_assigned();
  for (NodeId t : target) {
    if (t >= graph.node_count()) throw Error(ErrorKind::range, "target id out of range");
    if (!in_target_[t]) {
      in_target_[t] = 1;
      ++target_size_;
    }
  }
  order_.reserve(graph.node_count());
}

bool CascadeSimulator::mark(NodeId v) noexcept {
  if (stamp_[v] == epoch_) return false;
  stamp_[v] = epoch_;
  order_.push_back(v);
  return true;
}

std::size_t CascadeSimulator::seed_frontier(std::span<const NodeId> seeds) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  order_.clear();
  std::size_t covered = 0;
  for (NodeId s : seeds) {
    if (mark(s)) covered += in_target_[s];
  }
  return covered;
}

std::size_t CascadeSimulator::run_trial(std::span<const NodeId> seeds, RngStream& rng) {
  std::size_t covered = seed_frontier(seeds);
  // order_ doubles as the BFS queue; nodes activated at step t are attempted
  // in step t+1, and every (active, inactive) pair is tried exactly once.
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const NodeId u = order_[head];
    for (const Edge& e : graph_->out_edges(u)) {
      if (stamp_[e.target] == epoch_) continue;
      if (rng.bernoulli(e.prob) && mark(e.target)) covered += in_target_[e.target];
    }
  }
  return covered;
}

std::size_t CascadeSimulator::run_live(std::span<const NodeId> seeds, const LiveEdgeTable& live) {
  std::size_t covered = seed_frontier(seeds);
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const NodeId u = order_[head];
    std::size_t k = graph_->out_edge_offset(u);
    for (const Edge& e : graph_->out_edges(u)) {
      if (live[k++] && mark(e.target)) covered += in_target_[e.target];
    }
  }
  return covered;
}

CascadeOutcome simulate_ic(const ProbGraph& graph, std::span<const NodeId> seeds,
                           std::span<const NodeId> target, RngStream& rng) {
  check_seeds(graph, seeds);
  CascadeSimulator sim(graph, target);
  CascadeOutcome out;
  out.coverage = sim.run_trial(seeds, rng);
  out.active.assign(sim.last_active().begin(), sim.last_active().end());
  std::sort(out.active.begin(), out.active.end());
  return out;
}

CascadeOutcome simulate_live(const ProbGraph& graph, std::span<const NodeId> seeds,
                             std::span<const NodeId> target, const LiveEdgeTable& live) {
  check_seeds(graph, seeds);
  if (live.size() != graph.edge_count()) {
    throw Error(ErrorKind::range, "live-edge table does not match edge count");
  }
  CascadeSimulator sim(graph, target);
  CascadeOutcome out;
  out.coverage = sim.run_live(seeds, live);
  out.active.assign(sim.last_active().begin(), sim.last_active().end());
  std::sort(out.active.begin(), out.active.end());
  return out;
}

double activation_prob_one_hop(const BipartiteGraph& graph, std::span<const NodeId> seeds,
                               NodeId v, Model model) {
  if (v >= graph.node_count() || !graph.is_right(v)) {
    throw Error(ErrorKind::domain, "activation target must be a right-side node");
  }
  const auto in = graph.in_edges(static_cast<std::size_t>(graph.right_index(v)));
  auto is_seed = [&](NodeId u) {
    return std::find(seeds.begin(), seeds.end(), u) != seeds.end();
  };
  if (model == Model::lt) {
    double total = 0.0;
    double active = 0.0;
    for (const auto& e : in) {
      total += e.prob;
      if (is_seed(e.source)) active += e.prob;
    }
    if (total > 1.0 + 1e-12) {
      throw Error(ErrorKind::invalid_lt_weights, "LT in-weights sum above 1");
    }
    return std::min(active, 1.0);
  }
  double miss = 1.0;
  for (const auto& e : in) {
    if (is_seed(e.source)) miss *= 1.0 - e.prob;
  }
  return 1.0 - miss;
}

}  // namespace smpcg
