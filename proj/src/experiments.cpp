#include "smpcg/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <ostream>

#include "smpcg/error.hpp"
#include "smpcg/estimate.hpp"

namespace smpcg {

namespace {

// Substream tags keep each experiment stage on its own random stream.
enum StreamTag : std::uint64_t {
  kGreedyStream = 1,
  kRandomOrderStream = 2,
  kCompProbStream = 3,
  kStatsGreedyStream = 4,
  kStatsRandomStream = 5,
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string join_labels(const ProbGraph& graph, std::span<const NodeId> ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ';';
    s += graph.label(ids[i]);
  }
  return s;
}

std::vector<std::uint64_t> load_volume(const std::string& path, const ParsedEdgeList& parsed) {
  const ProbGraph& g = parsed.graph;
  std::vector<std::uint64_t> volume(g.node_count(), 0);
  if (path.empty()) {
    auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) volume[edges[k].target] += parsed.multiplicity[k];
    return volume;
  }
  // "label count" lines share the edge-list tokenizer: parse as an edge list
  // would reject a numeric second field, so read it directly.
  const auto text = [&] {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw Error(ErrorKind::parse, "cannot open " + path);
    std::string s;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, got);
    std::fclose(f);
    return s;
  }();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    char label[256];
    unsigned long long count = 0;
    if (line.empty() || line[0] == '#') continue;
    if (std::sscanf(line.c_str(), "%255s %llu", label, &count) != 2) {
      throw ParseError(line_no, "expected \"label count\"");
    }
    if (auto id = g.find_label(label)) volume[*id] = count;
  }
  return volume;
}

template <typename Row, typename Fn>
std::vector<Row> run_points(std::size_t count, std::size_t jobs, Fn&& fn) {
  std::vector<Row> rows(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(std::max<std::size_t>(jobs, 1)))
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(smpcg_point_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<NodeId> random_subset(std::size_t n, std::size_t k, RngStream rng) {
  std::vector<NodeId> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<NodeId>(i);
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::range:
    case ErrorKind::invalid_weight:
      return kExitParse;
    case ErrorKind::infeasible:
      return kExitInfeasible;
    case ErrorKind::config:
    case ErrorKind::domain:
    case ErrorKind::invalid_graph:
    case ErrorKind::invalid_lt_weights:
    case ErrorKind::not_bipartite:
    case ErrorKind::too_large:
      return kExitConfig;
    case ErrorKind::log_domain:
    case ErrorKind::not_found:
      return kExitInternal;
  }
  return kExitInternal;
}

std::vector<std::string> validate_config(const RunConfig& c, bool needs_eta) {
  std::vector<std::string> errs;
  if (c.graph_path.empty()) errs.emplace_back("--graph is required");
  if (!(c.p_threshold > 0.0 && c.p_threshold < 1.0)) {
    errs.emplace_back("--p-threshold must lie in (0,1)");
  }
  if (!(c.eps >= 0.0 && c.eps < (1.0 - c.p_threshold) / 2.0)) {
    errs.emplace_back("--eps must lie in [0, (1-P)/2)");
  }
  if (needs_eta && c.eta == 0) errs.emplace_back("--eta must be a positive integer");
  if (c.runs == 0) errs.emplace_back("--runs must be >= 1");
  if (c.greedy_samples == 0) errs.emplace_back("--greedy-samples must be >= 1");
  if (c.methods.empty()) errs.emplace_back("--method needs at least one method");
  if (c.jobs == 0) errs.emplace_back("--jobs must be >= 1");
  if (c.target.empty()) errs.emplace_back("--target must be ALL or a file path");
  if (!c.volume_path.empty() && c.weighting != Weighting::collaboration) {
    errs.emplace_back("--volume only applies to --weighting collaboration");
  }
  return errs;
}

Problem make_problem(ProbGraph graph, std::vector<NodeId> target, Evaluator evaluator) {
  Problem p{std::move(graph), std::move(target), std::nullopt};
  if (evaluator == Evaluator::exact_bipartite) p.bipartite = as_bipartite(p.graph);
  return p;
}

Problem load_problem(const RunConfig& config) {
  ParsedEdgeList parsed = load_edge_list(config.graph_path, !config.undirected);
  ProbGraph graph;
  switch (config.weighting) {
    case Weighting::given:
      graph = std::move(parsed.graph);
      break;
    case Weighting::weighted_cascade:
      graph = assign_weighted_cascade(parsed.graph);
      break;
    case Weighting::collaboration:
      graph = assign_collaboration_weights(parsed.graph, parsed.multiplicity,
                                           load_volume(config.volume_path, parsed));
      break;
  }
  graph.require_assigned();
  std::vector<NodeId> target =
      config.target == "ALL" ? all_nodes(graph) : load_target_spec(config.target, graph);
  return make_problem(std::move(graph), std::move(target), config.evaluator);
}

SeedSequence build_sequence(const Problem& problem, const RunConfig& config,
                            SequenceMethod method) {
  SeedSequence seq;
  switch (method) {
    case SequenceMethod::greedy: {
      GreedyConfig gc;
      gc.samples = config.greedy_samples;
      gc.max_length = config.max_seeds;
      if (config.evaluator == Evaluator::exact_bipartite) {
        ExactBipartiteOracle oracle(*problem.bipartite, problem.target, config.model);
        return greedy_ecg(oracle, gc);
      }
      SampledCoverageOracle oracle(problem.graph, problem.target, gc.samples,
                                   RngStream(config.seed, kGreedyStream));
      return greedy_ecg(oracle, gc);
    }
    case SequenceMethod::random:
      seq = baseline_random(problem.graph, RngStream(config.seed, kRandomOrderStream));
      break;
    case SequenceMethod::high_degree:
      seq = baseline_high_degree(problem.graph);
      break;
    case SequenceMethod::pagerank:
      seq = baseline_pagerank(problem.graph);
      break;
  }
  if (config.max_seeds > 0 && seq.order.size() > config.max_seeds) {
    seq.order.resize(config.max_seeds);
  }
  return seq;
}

CompProb build_comp_prob(const Problem& problem, const RunConfig& config, std::size_t eta) {
  if (config.evaluator == Evaluator::exact_bipartite) {
    return exact_bipartite_comp_prob(*problem.bipartite, problem.target, eta, config.model);
  }
  return monte_carlo_comp_prob(problem.graph, problem.target, eta, config.runs,
                               RngStream(config.seed, kCompProbStream));
}

namespace {

PcgInstance instance_for(const Problem& problem, const RunConfig& config, std::size_t eta) {
  PcgInstance inst;
  inst.graph = &problem.graph;
  inst.target = problem.target;
  inst.eta = eta;
  inst.p_threshold = config.p_threshold;
  inst.allow_full_coverage = config.evaluator == Evaluator::exact_bipartite;
  return inst;
}

}  // namespace

int cmd_solve(const Problem& problem, const RunConfig& config, std::ostream& out) {
  struct Record {
    std::string line;
    bool feasible = true;
  };
  const auto inst = instance_for(problem, config, config.eta);
  inst.validate();
  auto records = run_points<Record>(config.methods.size(), config.jobs, [&](std::size_t i) {
    const auto method = config.methods[i];
    const auto start = std::chrono::steady_clock::now();
    const SeedSequence seq = build_sequence(problem, config, method);
    const CompProb cp = build_comp_prob(problem, config, config.eta);
    Record r;
    std::string body;
    try {
      const PcgSolution sol = min_seed_pcg(inst, config.eps, seq, cp, config.search);
      body = to_string(method) + "," + std::to_string(sol.seeds.size()) + "," +
             fixed6(sol.achieved_prob) + "," + join_labels(problem.graph, sol.seeds);
    } catch (const InfeasibleError& e) {
      r.feasible = false;
      body = to_string(method) + ",NA," + fixed6(e.best_prob()) + ",";
    }
    if (config.timing) {
      const auto ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      body += "," + fixed6(ms);
    }
    r.line = std::move(body);
    return r;
  });
  out << "method,seed_count,achieved_prob,seeds" << (config.timing ? ",wall_ms" : "") << '\n';
  bool all_feasible = true;
  for (const Record& r : records) {
    out << r.line << '\n';
    all_feasible = all_feasible && r.feasible;
  }
  return all_feasible ? kExitOk : kExitInfeasible;
}

int cmd_sweep_eta(const Problem& problem, const RunConfig& config,
                  std::span<const std::size_t> etas, std::ostream& out) {
  for (std::size_t eta : etas) instance_for(problem, config, eta).validate();
  std::vector<SeedSequence> sequences;
  for (SequenceMethod m : config.methods) sequences.push_back(build_sequence(problem, config, m));

  struct Row {
    std::size_t eta = 0;
    std::size_t method = 0;
    std::string size;
  };
  const std::size_t nm = config.methods.size();
  auto rows = run_points<Row>(etas.size() * nm, config.jobs, [&](std::size_t p) {
    Row r{etas[p / nm], p % nm, "NA"};
    const CompProb cp = build_comp_prob(problem, config, r.eta);
    try {
      const auto sol = min_seed_pcg(instance_for(problem, config, r.eta), config.eps,
                                    sequences[r.method], cp, config.search);
      r.size = std::to_string(sol.seeds.size());
    } catch (const InfeasibleError&) {
    }
    return r;
  });
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.eta != b.eta ? a.eta < b.eta : a.method < b.method;
  });
  out << "eta,method,seed_size\n";
  bool all_feasible = true;
  for (const Row& r : rows) {
    out << r.eta << ',' << to_string(config.methods[r.method]) << ',' << r.size << '\n';
    all_feasible = all_feasible && r.size != "NA";
  }
  return all_feasible ? kExitOk : kExitInfeasible;
}

int cmd_phase_transition(const Problem& problem, const RunConfig& config,
                         std::span<const std::size_t> sizes, std::ostream& out) {
  instance_for(problem, config, config.eta).validate();
  std::vector<SeedSequence> sequences;
  for (SequenceMethod m : config.methods) sequences.push_back(build_sequence(problem, config, m));
  const CompProb cp = build_comp_prob(problem, config, config.eta);

  std::vector<std::size_t> sorted(sizes.begin(), sizes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t k : sorted) {
    for (const auto& seq : sequences) {
      if (k > seq.order.size()) {
        throw Error(ErrorKind::config, "size " + std::to_string(k) + " exceeds the " +
                                           to_string(seq.method) + " sequence length");
      }
    }
  }
  const std::size_t nm = sequences.size();
  auto probs = run_points<double>(sorted.size() * nm, config.jobs, [&](std::size_t p) {
    return cp.eval(sequences[p % nm].prefix(sorted[p / nm]));
  });
  out << "size,method,prob\n";
  for (std::size_t p = 0; p < probs.size(); ++p) {
    out << sorted[p / nm] << ',' << to_string(sequences[p % nm].method) << ','
        << fixed6(probs[p]) << '\n';
  }
  return kExitOk;
}

int cmd_stats(const Problem& problem, const RunConfig& config, std::span<const std::size_t> sizes,
              std::size_t random_sets_per_size, std::ostream& out) {
  if (config.runs < 2) throw Error(ErrorKind::config, "stats needs --runs >= 2");
  if (random_sets_per_size == 0) throw Error(ErrorKind::config, "--random-sets must be >= 1");
  std::vector<std::size_t> sorted(sizes.begin(), sizes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::size_t n = problem.graph.node_count();
  for (std::size_t k : sorted) {
    if (k > n) throw Error(ErrorKind::config, "size " + std::to_string(k) + " exceeds n");
  }
  const SeedSequence greedy = build_sequence(problem, config, SequenceMethod::greedy);
  if (!sorted.empty() && sorted.back() > greedy.order.size()) {
    throw Error(ErrorKind::config, "size exceeds the greedy sequence length (--max-seeds)");
  }

  struct Row {
    double greedy_mean = 0, greedy_sd = 0, random_mean = 0, random_sd = -1;
  };
  const RngStream greedy_rng(config.seed, kStatsGreedyStream);
  const RngStream random_rng(config.seed, kStatsRandomStream);
  auto rows = run_points<Row>(sorted.size(), config.jobs, [&](std::size_t p) {
    const std::size_t k = sorted[p];
    Row r;
    const auto g = coverage_stats(problem.graph, problem.target, greedy.prefix(k), config.runs,
                                  greedy_rng.substream(k));
    r.greedy_mean = g.mean();
    r.greedy_sd = g.stddev();
    const RngStream per_size = random_rng.substream(k);
    for (std::size_t s = 0; s < random_sets_per_size; ++s) {
      const auto set = random_subset(n, k, per_size.substream(2 * s));
      const auto st = coverage_stats(problem.graph, problem.target, set, config.runs,
                                     per_size.substream(2 * s + 1));
      if (st.stddev() > r.random_sd) {
        r.random_sd = st.stddev();
        r.random_mean = st.mean();
      }
    }
    return r;
  });
  out << "size,which,mean,stddev\n";
  for (std::size_t p = 0; p < rows.size(); ++p) {
    out << sorted[p] << ",greedy," << fixed6(rows[p].greedy_mean) << ','
        << fixed6(rows[p].greedy_sd) << '\n';
    out << sorted[p] << ",random-max," << fixed6(rows[p].random_mean) << ','
        << fixed6(rows[p].random_sd) << '\n';
  }
  return kExitOk;
}

int cmd_exact_dp(const Problem& problem, const RunConfig& config, std::span<const NodeId> seeds,
                 bool full_table, std::ostream& out) {
  if (!problem.bipartite) throw Error(ErrorKind::config, "exact-dp needs a bipartite graph");
  const auto probs = target_activation_probs(*problem.bipartite, seeds, problem.target,
                                             config.model);
  const DpTable table(probs);
  const std::size_t m = table.size();
  if (full_table) {
    out << "i,j,prob\n";
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = 0; j <= i; ++j) out << i << ',' << j << ',' << fixed6(table.at(i, j)) << '\n';
    }
    return kExitOk;
  }
  out << "j,prob,tail\n";
  for (std::size_t j = 0; j <= m; ++j) {
    out << j << ',' << fixed6(table.at(m, j)) << ',' << fixed6(table.tail(j)) << '\n';
  }
  return kExitOk;
}

int cmd_oracle(const Problem& problem, std::span<const NodeId> seeds, std::ostream& out) {
  const auto dist = exact_distribution_bruteforce(problem.graph, problem.target, seeds);
  out << "j,prob,tail\n";
  for (std::size_t j = 0; j < dist.probs.size(); ++j) {
    out << j << ',' << fixed6(dist.probs[j]) << ',' << fixed6(dist.tail(j)) << '\n';
  }
  return kExitOk;
}

std::vector<NodeId> resolve_labels(const ProbGraph& graph, std::string_view csv) {
  std::vector<NodeId> ids;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find(',', pos);
    if (end == std::string_view::npos) end = csv.size();
    const auto label = csv.substr(pos, end - pos);
    pos = end + 1;
    if (label.empty()) continue;
    auto id = graph.find_label(label);
    if (!id) throw Error(ErrorKind::parse, "unknown node label '" + std::string(label) + "'");
    ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace smpcg
