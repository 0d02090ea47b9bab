// smpcg: command-line driver for seed minimization with a coverage guarantee.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "smpcg/error.hpp"
#include "smpcg/experiments.hpp"

namespace {

using namespace smpcg;

struct CliState {
  RunConfig config;
  std::vector<std::string> methods{"greedy"};
  std::string output;
  std::string model = "ic";
};

int emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return std::cout ? kExitOk : kExitInternal;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << path << '\n';
    return kExitConfig;
  }
  f << text;
  return f ? kExitOk : kExitInternal;
}

// Resolves the string-typed knobs and checks every constraint; prints all
// violations and returns false if any.
bool finalize(CliState& st, bool needs_eta) {
  std::vector<std::string> errs;
  st.config.methods.clear();
  for (const auto& name : st.methods) {
    if (auto m = parse_sequence_method(name)) {
      st.config.methods.push_back(*m);
    } else {
      errs.push_back("unknown method '" + name + "'");
    }
  }
  if (st.model == "ic") {
    st.config.model = Model::ic;
  } else if (st.model == "lt") {
    st.config.model = Model::lt;
    if (st.config.evaluator != Evaluator::exact_bipartite) {
      errs.emplace_back("--model lt is only available with --evaluator exact_bipartite");
    }
  } else {
    errs.push_back("unknown model '" + st.model + "'");
  }
  auto rest = validate_config(st.config, needs_eta);
  errs.insert(errs.end(), rest.begin(), rest.end());
  for (const auto& e : errs) std::cerr << "config error: " << e << '\n';
  return errs.empty();
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum seed sets with a probabilistic coverage guarantee"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");

  CliState st;
  RunConfig& c = st.config;

  const std::map<std::string, Weighting> weightings{
      {"given", Weighting::given},
      {"weighted_cascade", Weighting::weighted_cascade},
      {"collaboration", Weighting::collaboration}};
  const std::map<std::string, Evaluator> evaluators{
      {"monte_carlo", Evaluator::monte_carlo}, {"exact_bipartite", Evaluator::exact_bipartite}};
  const std::map<std::string, SearchMode> searches{{"linear", SearchMode::linear},
                                                   {"binary", SearchMode::binary}};

  app.add_option("--graph", c.graph_path, "Edge-list file: 'u v [p]' per line");
  app.add_flag("--undirected", c.undirected, "Treat each line as two directed edges");
  app.add_option("--weighting", c.weighting, "given | weighted_cascade | collaboration")
      ->transform(CLI::CheckedTransformer(weightings, CLI::ignore_case));
  app.add_option("--volume", c.volume_path, "Per-node 'label count' file for collaboration weights");
  app.add_option("--target", c.target, "Target file of node labels, or ALL");
  app.add_option("--eta", c.eta, "Coverage threshold");
  app.add_option("--p-threshold", c.p_threshold, "Required probability P");
  app.add_option("--eps", c.eps, "Estimator slack; ignored by the exact evaluator");
  app.add_option("--runs", c.runs, "Monte Carlo runs R per probability estimate");
  app.add_option("--seed", c.seed, "RNG seed")->envname("SMPCG_SEED");
  app.add_option("--method", st.methods, "greedy,random,high_degree,pagerank")->delimiter(',');
  app.add_option("--evaluator", c.evaluator, "monte_carlo | exact_bipartite")
      ->transform(CLI::CheckedTransformer(evaluators, CLI::ignore_case));
  app.add_option("--search", c.search, "linear | binary prefix search")
      ->transform(CLI::CheckedTransformer(searches, CLI::ignore_case));
  app.add_option("--model", st.model, "ic | lt (lt: exact bipartite only)");
  app.add_option("--greedy-samples", c.greedy_samples, "Live-edge samples behind greedy estimates");
  app.add_option("--max-seeds", c.max_seeds, "Cap on sequence length (0 = n)");
  app.add_option("--jobs", c.jobs, "Concurrent sweep points")->envname("SMPCG_JOBS");
  app.add_flag("--timing", c.timing, "Append a wall_ms column (breaks byte-identical output)");
  app.add_option("--output,-o", st.output, "Output file (default stdout)");

  int status = kExitOk;

  auto* gen = app.add_subcommand("gen", "Synthetic preferential-attachment graph, WC-weighted");
  std::size_t gen_n = 200, gen_m = 2;
  gen->add_option("--n", gen_n, "Node count")->required();
  gen->add_option("--edges-per-node", gen_m, "Attachments per new node");
  gen->callback([&] {
    status = guarded([&] {
      if (gen_n < 2 || gen_m == 0) {
        std::cerr << "config error: gen needs --n >= 2 and --edges-per-node >= 1\n";
        return static_cast<int>(kExitConfig);
      }
      std::ostringstream out;
      write_edge_list(generate_preferential_attachment(gen_n, gen_m, c.seed), out);
      return emit(out.str(), st.output);
    });
  });

  auto* solve = app.add_subcommand("solve", "Minimum prefix meeting the coverage guarantee");
  solve->callback([&] {
    if (!finalize(st, true)) {
      status = kExitConfig;
      return;
    }
    status = guarded([&] {
      const Problem p = load_problem(c);
      std::ostringstream out;
      const int rc = cmd_solve(p, c, out);
      const int wrc = emit(out.str(), st.output);
      return wrc != kExitOk ? wrc : rc;
    });
  });

  std::vector<std::size_t> etas;
  auto* sweep = app.add_subcommand("sweep-eta", "Seed-set size per (eta, method)");
  sweep->add_option("--etas", etas, "Comma-separated thresholds")->delimiter(',');
  sweep->callback([&] {
    if (!finalize(st, false)) {
      status = kExitConfig;
      return;
    }
    status = guarded([&] {
      const Problem p = load_problem(c);
      std::ostringstream out;
      const int rc = cmd_sweep_eta(p, c, etas, out);
      const int wrc = emit(out.str(), st.output);
      return wrc != kExitOk ? wrc : rc;
    });
  });

  std::vector<std::size_t> sizes;
  auto* phase = app.add_subcommand("phase-transition", "Coverage probability per prefix size");
  phase->add_option("--sizes", sizes, "Comma-separated prefix sizes")->delimiter(',');
  phase->callback([&] {
    if (!finalize(st, true)) {
      status = kExitConfig;
      return;
    }
    status = guarded([&] {
      const Problem p = load_problem(c);
      std::ostringstream out;
      cmd_phase_transition(p, c, sizes, out);
      return emit(out.str(), st.output);
    });
  });

  std::size_t random_sets = 10;
  auto* stats = app.add_subcommand("stats", "Coverage mean/stddev: greedy vs random k-sets");
  stats->add_option("--sizes", sizes, "Comma-separated set sizes")->delimiter(',');
  stats->add_option("--random-sets", random_sets, "Random k-sets per size");
  stats->callback([&] {
    if (!finalize(st, false)) {
      status = kExitConfig;
      return;
    }
    status = guarded([&] {
      const Problem p = load_problem(c);
      std::ostringstream out;
      cmd_stats(p, c, sizes, random_sets, out);
      return emit(out.str(), st.output);
    });
  });

  std::string seed_labels;
  bool full_table = false;
  auto* dp = app.add_subcommand("exact-dp", "Exact coverage distribution on a bipartite graph");
  dp->add_option("--seeds", seed_labels, "Comma-separated seed labels");
  dp->add_flag("--full-table", full_table, "Dump every DP row, not just the last");
  dp->callback([&] {
    c.evaluator = Evaluator::exact_bipartite;
    if (!finalize(st, false)) {
      status = kExitConfig;
      return;
    }
    status = guarded([&] {
      const Problem p = load_problem(c);
      std::ostringstream out;
      cmd_exact_dp(p, c, resolve_labels(p.graph, seed_labels), full_table, out);
      return emit(out.str(), st.output);
    });
  });

  auto* oracle = app.add_subcommand("oracle", "Brute-force coverage distribution (<= 25 edges)");
  oracle->add_option("--seeds", seed_labels, "Comma-separated seed labels");
  oracle->callback([&] {
    c.evaluator = Evaluator::monte_carlo;
    if (!finalize(st, false)) {
      status = kExitConfig;
      return;
    }
    status = guarded([&] {
      const Problem p = load_problem(c);
      std::ostringstream out;
      cmd_oracle(p, resolve_labels(p.graph, seed_labels), out);
      return emit(out.str(), st.output);
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(kExitConfig);
  }
  return status;
}
