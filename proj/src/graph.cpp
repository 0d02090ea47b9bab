#include "smpcg/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "smpcg/error.hpp"

namespace smpcg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse error";
    case ErrorKind::range: return "range error";
    case ErrorKind::invalid_graph: return "invalid graph";
    case ErrorKind::invalid_weight: return "invalid weight";
    case ErrorKind::invalid_lt_weights: return "invalid LT weights";
    case ErrorKind::not_bipartite: return "not bipartite";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::too_large: return "too large";
    case ErrorKind::log_domain: return "log-domain error";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::not_found: return "not found";
    case ErrorKind::config: return "config error";
  }
  return "error";
}

namespace {

bool valid_prob(double p) { return is_unassigned(p) || (p >= 0.0 && p <= 1.0); }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    f(line_no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace

ProbGraph::ProbGraph(std::size_t n, std::vector<Edge> edges, std::vector<std::string> labels)
    : n_(n), labels_(std::move(labels)) {
  for (const Edge& e : edges) {
    if (e.source >= n || e.target >= n) {
      throw Error(ErrorKind::range, "edge endpoint out of range");
    }
    if (!valid_prob(e.prob)) {
      throw Error(ErrorKind::range, "edge probability outside [0,1]");
    }
  }
  std::erase_if(edges, [](const Edge& e) { return e.source == e.target; });
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (const Edge& e : edges) {
    if (!edges_.empty() && edges_.back().source == e.source &&
        edges_.back().target == e.target) {
      double& p = edges_.back().prob;
      if (is_unassigned(p) || is_unassigned(e.prob)) {
        p = kUnassigned;
      } else {
        p = 1.0 - (1.0 - p) * (1.0 - e.prob);
      }
    } else {
      edges_.push_back(e);
    }
  }
  if (labels_.empty()) {
    labels_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != n) throw Error(ErrorKind::range, "label count differs from node count");
  build_index();
}

void ProbGraph::build_index() {
  out_offsets_.assign(n_ + 1, 0);
  in_offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++out_offsets_[e.source + 1];
    ++in_offsets_[e.target + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  in_ids_.assign(edges_.size(), 0);
  std::vector<std::size_t> fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // edges_ is sorted by source, so each in-list comes out ascending by source
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    in_ids_[fill[edges_[k].target]++] = static_cast<std::uint32_t>(k);
  }
  label_index_.clear();
  label_index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    label_index_.emplace(labels_[i], static_cast<NodeId>(i));
  }
}

std::optional<std::size_t> ProbGraph::find_edge(NodeId u, NodeId v) const {
  if (u >= n_) return std::nullopt;
  auto out = out_edges(u);
  auto it = std::lower_bound(out.begin(), out.end(), v,
                             [](const Edge& e, NodeId t) { return e.target < t; });
  if (it == out.end() || it->target != v) return std::nullopt;
  return out_edge_offset(u) + static_cast<std::size_t>(it - out.begin());
}

bool ProbGraph::has_unassigned() const noexcept {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return is_unassigned(e.prob); });
}

void ProbGraph::require_assigned() const {
  if (has_unassigned()) {
    throw Error(ErrorKind::invalid_graph,
                "graph has unassigned edge probabilities; apply a weighting scheme first");
  }
}

ProbGraph ProbGraph::with_probabilities(std::span<const double> probs) const {
  if (probs.size() != edges_.size()) {
    throw Error(ErrorKind::range, "probability vector does not match edge count");
  }
  ProbGraph g = *this;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!valid_prob(probs[k])) throw Error(ErrorKind::range, "edge probability outside [0,1]");
    g.edges_[k].prob = probs[k];
  }
  return g;
}

std::string ProbGraph::label(NodeId v) const { return labels_.at(v); }

std::optional<NodeId> ProbGraph::find_label(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const ProbGraph& a, const ProbGraph& b) {
  if (a.n_ != b.n_ || a.edges_.size() != b.edges_.size() || a.labels_ != b.labels_) {
    return false;
  }
  for (std::size_t k = 0; k < a.edges_.size(); ++k) {
    const Edge& x = a.edges_[k];
    const Edge& y = b.edges_[k];
    if (x.source != y.source || x.target != y.target) return false;
    if (is_unassigned(x.prob) != is_unassigned(y.prob)) return false;
    if (!is_unassigned(x.prob) && x.prob != y.prob) return false;
  }
  return true;
}

ParsedEdgeList parse_edge_list(std::string_view text, bool directed) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](std::string_view s) {
    auto [it, fresh] = ids.emplace(std::string(s), static_cast<NodeId>(labels.size()));
    if (fresh) labels.emplace_back(s);
    return it->second;
  };

  std::vector<Edge> raw;
  ParsedEdgeList result;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') return;
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(line_no, "expected \"u v\" or \"u v p\", got " +
                                    std::to_string(fields.size()) + " fields");
    }
    double p = kUnassigned;
    if (fields.size() == 3) {
      const char* first = fields[2].data();
      const char* last = first + fields[2].size();
      auto [ptr, ec] = std::from_chars(first, last, p);
      if (ec != std::errc() || ptr != last) {
        throw ParseError(line_no, "malformed probability '" + std::string(fields[2]) + "'");
      }
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::range, "line " + std::to_string(line_no) +
                                          ": probability " + std::string(fields[2]) +
                                          " outside [0,1]");
      }
    }
    if (fields[0] == fields[1]) {
      ++result.self_loops_dropped;
      return;
    }
    NodeId u = intern(fields[0]);
    NodeId v = intern(fields[1]);
    raw.push_back({u, v, p});
    if (!directed) raw.push_back({v, u, p});
  });

  const std::size_t n = labels.size();
  result.graph = ProbGraph(n, raw, std::move(labels));
  result.multiplicity.assign(result.graph.edge_count(), 0);
  for (const Edge& e : raw) ++result.multiplicity[*result.graph.find_edge(e.source, e.target)];
  result.duplicates_merged = raw.size() - result.graph.edge_count();
  return result;
}

ParsedEdgeList load_edge_list(const std::string& path, bool directed) {
  return parse_edge_list(read_file(path), directed);
}

void write_edge_list(const ProbGraph& graph, std::ostream& out) {
  char buf[64];
  for (const Edge& e : graph.edges()) {
    out << graph.label(e.source) << ' ' << graph.label(e.target);
    if (!is_unassigned(e.prob)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.prob);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

ProbGraph assign_weighted_cascade(const ProbGraph& graph) {
  std::vector<double> probs(graph.edge_count());
  auto edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    probs[k] = 1.0 / static_cast<double>(graph.in_degree(edges[k].target));
  }
  return graph.with_probabilities(probs);
}

ProbGraph assign_collaboration_weights(const ProbGraph& graph,
                                       std::span<const std::uint32_t> multiplicity,
                                       std::span<const std::uint64_t> volume) {
  if (multiplicity.size() != graph.edge_count() || volume.size() != graph.node_count()) {
    throw Error(ErrorKind::invalid_weight, "multiplicity/volume size mismatch");
  }
  std::vector<double> probs(graph.edge_count());
  auto edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto vol = volume[edges[k].target];
    if (vol == 0) {
      throw Error(ErrorKind::invalid_weight,
                  "node " + graph.label(edges[k].target) + " has zero volume but an in-edge");
    }
    if (multiplicity[k] > vol) {
      throw Error(ErrorKind::invalid_weight,
                  "edge " + graph.label(edges[k].source) + "->" + graph.label(edges[k].target) +
                      " multiplicity exceeds target volume");
    }
    probs[k] = static_cast<double>(multiplicity[k]) / static_cast<double>(vol);
  }
  return graph.with_probabilities(probs);
}

std::vector<NodeId> all_nodes(const ProbGraph& graph) {
  std::vector<NodeId> all(graph.node_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NodeId>(i);
  return all;
}

std::vector<NodeId> parse_target_spec(std::string_view text, const ProbGraph& graph) {
  std::vector<NodeId> target;
  bool all = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') return;
    if (fields.size() != 1) throw ParseError(line_no, "expected one node label per line");
    if (fields[0] == "ALL") {
      all = true;
      return;
    }
    auto id = graph.find_label(fields[0]);
    if (!id) throw ParseError(line_no, "unknown node label '" + std::string(fields[0]) + "'");
    target.push_back(*id);
  });
  if (all) return all_nodes(graph);
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());
  return target;
}

std::vector<NodeId> load_target_spec(const std::string& path, const ProbGraph& graph) {
  return parse_target_spec(read_file(path), graph);
}

double BipartiteGraph::min_edge_prob() const noexcept {
  double lo = 1.0;
  for (const auto& list : in_) {
    for (const InEdge& e : list) lo = std::min(lo, e.prob);
  }
  return lo;
}

BipartiteGraph as_bipartite(const ProbGraph& graph) {
  graph.require_assigned();
  BipartiteGraph b;
  const std::size_t n = graph.node_count();
  b.side_.assign(n, 0);
  b.right_pos_.assign(n, -1);
  for (NodeId v = 0; v < n; ++v) {
    const bool has_out = graph.out_degree(v) > 0;
    const bool has_in = graph.in_degree(v) > 0;
    if (has_out && has_in) {
      throw Error(ErrorKind::not_bipartite,
                  "node " + graph.label(v) + " has both incoming and outgoing edges");
    }
    if (has_in) {
      b.side_[v] = 1;
      b.right_pos_[v] = static_cast<std::int64_t>(b.right_.size());
      b.right_.push_back(v);
    } else {
      b.left_.push_back(v);
    }
  }
  b.in_.resize(b.right_.size());
  b.out_.resize(n);
  for (std::size_t r = 0; r < b.right_.size(); ++r) {
    for (std::uint32_t k : graph.in_edge_ids(b.right_[r])) {
      const Edge& e = graph.edges()[k];
      b.in_[r].push_back({e.source, e.prob});
      b.out_[e.source].push_back({static_cast<std::uint32_t>(r), e.prob});
    }
  }
  return b;
}

ProbGraph make_bipartite_graph(std::size_t left, std::size_t right,
                               std::span<const BipartiteEdge> edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const BipartiteEdge& e : edges) {
    if (e.left >= left || e.right >= right) {
      throw Error(ErrorKind::range, "bipartite edge endpoint out of range");
    }
    out.push_back({e.left, static_cast<NodeId>(left + e.right), e.prob});
  }
  return ProbGraph(left + right, std::move(out));
}

}  // namespace smpcg
