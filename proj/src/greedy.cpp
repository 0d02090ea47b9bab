#include <omp.h>

#include <algorithm>
#include <queue>

#include "smpcg/error.hpp"
#include "smpcg/seedmin.hpp"

namespace smpcg {

std::string to_string(SequenceMethod method) {
  switch (method) {
    case SequenceMethod::greedy: return "greedy";
    case SequenceMethod::random: return "random";
    case SequenceMethod::high_degree: return "high_degree";
    case SequenceMethod::pagerank: return "pagerank";
  }
  return "unknown";
}

std::optional<SequenceMethod> parse_sequence_method(std::string_view name) {
  if (name == "greedy") return SequenceMethod::greedy;
  if (name == "random") return SequenceMethod::random;
  if (name == "high_degree") return SequenceMethod::high_degree;
  if (name == "pagerank") return SequenceMethod::pagerank;
  return std::nullopt;
}

struct SampledCoverageOracle::Impl {
  const ProbGraph* graph;
  std::size_t n;
  std::size_t edges;
  std::size_t samples;
  std::vector<std::uint8_t> in_target;
  std::vector<std::uint8_t> live;    // samples x edges
  std::vector<std::uint8_t> active;  // samples x n
  std::vector<std::uint8_t> seeded;
  std::uint64_t covered = 0;

  // BFS from v in sample k over live edges, skipping already-active nodes.
  // With `commit` the reached nodes become active.
  std::uint64_t spread(std::size_t k, NodeId v, bool commit, std::vector<std::uint32_t>& stamp,
                       std::uint32_t& epoch, std::vector<NodeId>& queue) {
    std::uint8_t* act = active.data() + k * n;
    if (act[v]) return 0;
    const std::uint8_t* alive = live.data() + k * edges;
    if (++epoch == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      epoch = 1;
    }
    queue.clear();
    queue.push_back(v);
    stamp[v] = epoch;
    std::uint64_t gained = in_target[v];
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      std::size_t e = graph->out_edge_offset(u);
      for (const Edge& edge : graph->out_edges(u)) {
        if (alive[e++] && !act[edge.target] && stamp[edge.target] != epoch) {
          stamp[edge.target] = epoch;
          queue.push_back(edge.target);
          gained += in_target[edge.target];
        }
      }
    }
    if (commit) {
      for (NodeId u : queue) act[u] = 1;
    }
    return gained;
  }
};

SampledCoverageOracle::SampledCoverageOracle(const ProbGraph& graph,
                                             std::span<const NodeId> target, std::size_t samples,
                                             const RngStream& rng)
    : impl_(std::make_unique<Impl>()) {
  graph.require_assigned();
  if (samples == 0) throw Error(ErrorKind::domain, "sampled oracle needs samples >= 1");
  Impl& s = *impl_;
  s.graph = &graph;
  s.n = graph.node_count();
  s.edges = graph.edge_count();
  s.samples = samples;
  s.in_target.assign(s.n, 0);
  for (NodeId t : target) {
    if (t >= s.n) throw Error(ErrorKind::range, "target id out of range");
    s.in_target[t] = 1;
  }
  s.live.assign(samples * s.edges, 0);
  s.active.assign(samples * s.n, 0);
  s.seeded.assign(s.n, 0);
  const auto all_edges = graph.edges();
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(samples); ++k) {
    RngStream r = rng.substream(static_cast<std::uint64_t>(k));
    std::uint8_t* row = s.live.data() + static_cast<std::size_t>(k) * s.edges;
    for (std::size_t e = 0; e < s.edges; ++e) row[e] = r.bernoulli(all_edges[e].prob);
  }
}

SampledCoverageOracle::~SampledCoverageOracle() = default;

std::size_t SampledCoverageOracle::node_count() const { return impl_->n; }
std::size_t SampledCoverageOracle::samples() const noexcept { return impl_->samples; }

double SampledCoverageOracle::value() const {
  return static_cast<double>(impl_->covered) / static_cast<double>(impl_->samples);
}

std::uint64_t SampledCoverageOracle::marginal_count(NodeId v) {
  Impl& s = *impl_;
  if (v >= s.n) throw Error(ErrorKind::range, "node id out of range");
  if (s.seeded[v]) return 0;
  std::uint64_t total = 0;
#pragma omp parallel reduction(+ : total)
  {
    std::vector<std::uint32_t> stamp(s.n, 0);
    std::uint32_t epoch = 0;
    std::vector<NodeId> queue;
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(s.samples); ++k) {
      total += s.spread(static_cast<std::size_t>(k), v, false, stamp, epoch, queue);
    }
  }
  return total;
}

double SampledCoverageOracle::marginal_gain(NodeId v) {
  return static_cast<double>(marginal_count(v)) / static_cast<double>(impl_->samples);
}

void SampledCoverageOracle::add_seed(NodeId v) {
  Impl& s = *impl_;
  if (v >= s.n) throw Error(ErrorKind::range, "node id out of range");
  if (s.seeded[v]) return;
  s.seeded[v] = 1;
  std::uint64_t total = 0;
#pragma omp parallel reduction(+ : total)
  {
    std::vector<std::uint32_t> stamp(s.n, 0);
    std::uint32_t epoch = 0;
    std::vector<NodeId> queue;
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(s.samples); ++k) {
      total += s.spread(static_cast<std::size_t>(k), v, true, stamp, epoch, queue);
    }
  }
  s.covered += total;
}

ExactBipartiteOracle::ExactBipartiteOracle(const BipartiteGraph& graph,
                                           std::span<const NodeId> target, Model model)
    : graph_(&graph),
      model_(model),
      seeded_(graph.node_count(), 0),
      targeted_(graph.node_count(), 0),
      right_prob_(graph.right_count(), 0.0) {
  for (NodeId t : target) {
    if (t >= graph.node_count()) throw Error(ErrorKind::range, "target id out of range");
    targeted_[t] = 1;
  }
  if (model == Model::lt) {
    // validates LT weights
    (void)activation_probs(graph, {}, model);
  }
}

double ExactBipartiteOracle::value() const {
  double v = 0.0;
  for (NodeId t = 0; t < targeted_.size(); ++t) {
    if (!targeted_[t]) continue;
    if (seeded_[t]) {
      v += 1.0;
    } else if (graph_->is_right(t)) {
      v += right_prob_[static_cast<std::size_t>(graph_->right_index(t))];
    }
  }
  return v;
}

double ExactBipartiteOracle::gain_for(NodeId v) const {
  if (seeded_[v]) return 0.0;
  if (graph_->is_right(v)) {
    if (!targeted_[v]) return 0.0;
    return 1.0 - right_prob_[static_cast<std::size_t>(graph_->right_index(v))];
  }
  double gain = targeted_[v] ? 1.0 : 0.0;
  for (const auto& e : graph_->out_edges(v)) {
    const NodeId r = graph_->right()[e.right_index];
    if (!targeted_[r] || seeded_[r]) continue;
    const double cur = right_prob_[e.right_index];
    const double next =
        model_ == Model::lt ? std::min(cur + e.prob, 1.0) : 1.0 - (1.0 - cur) * (1.0 - e.prob);
    gain += next - cur;
  }
  return gain;
}

double ExactBipartiteOracle::marginal_gain(NodeId v) {
  if (v >= graph_->node_count()) throw Error(ErrorKind::range, "node id out of range");
  return gain_for(v);
}

void ExactBipartiteOracle::add_seed(NodeId v) {
  if (v >= graph_->node_count()) throw Error(ErrorKind::range, "node id out of range");
  if (seeded_[v]) return;
  seeded_[v] = 1;
  if (!graph_->is_left(v)) return;
  for (const auto& e : graph_->out_edges(v)) {
    double& cur = right_prob_[e.right_index];
    cur = model_ == Model::lt ? std::min(cur + e.prob, 1.0) : 1.0 - (1.0 - cur) * (1.0 - e.prob);
  }
}

namespace {

struct Candidate {
  double gain;
  NodeId node;
  std::size_t round;
};

// Max-heap on gain; equal gains surface the lowest id first.
struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  }
};

}  // namespace

SeedSequence greedy_ecg(CoverageOracle& oracle, const GreedyConfig& config) {
  if (config.inflation < 1.0) throw Error(ErrorKind::domain, "stopping inflation must be >= 1");
  const std::size_t n = oracle.node_count();
  const std::size_t length = config.max_length == 0 ? n : std::min(config.max_length, n);
  SeedSequence seq;
  seq.method = SequenceMethod::greedy;
  seq.order.reserve(length);
  seq.gains.reserve(length);

  auto should_stop = [&] {
    return config.stop_at_eta &&
           oracle.value() >= config.inflation * static_cast<double>(config.eta);
  };
  if (should_stop()) {
    seq.stop_index = 0;
    return seq;
  }

  std::vector<std::uint8_t> chosen(n, 0);
  auto commit = [&](NodeId v, double gain) {
    chosen[v] = 1;
    oracle.add_seed(v);
    seq.order.push_back(v);
    seq.gains.push_back(gain);
    if (should_stop()) seq.stop_index = seq.order.size();
  };

  if (!config.lazy) {
    while (seq.order.size() < length && !seq.stop_index) {
      NodeId best = 0;
      double best_gain = -1.0;
      for (NodeId v = 0; v < n; ++v) {
        if (chosen[v]) continue;
        const double g = oracle.marginal_gain(v);
        if (g > best_gain) {
          best_gain = g;
          best = v;
        }
      }
      commit(best, best_gain);
    }
    return seq;
  }

  // CELF: stale gains upper-bound fresh ones for a submodular oracle, so a
  // candidate re-evaluated in the current round that stays on top is the argmax.
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap;
  for (NodeId v = 0; v < n; ++v) heap.push({oracle.marginal_gain(v), v, 0});
  std::size_t round = 0;
  while (seq.order.size() < length && !seq.stop_index && !heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    if (top.round == round) {
      commit(top.node, top.gain);
      ++round;
    } else {
      heap.push({oracle.marginal_gain(top.node), top.node, round});
    }
  }
  return seq;
}

SeedSequence greedy_ecg(const ProbGraph& graph, std::span<const NodeId> target,
                        const GreedyConfig& config, const RngStream& rng) {
  SampledCoverageOracle oracle(graph, target, config.samples, rng);
  return greedy_ecg(oracle, config);
}

}  // namespace smpcg
