#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smpcg/error.hpp"
#include "smpcg/estimate.hpp"
#include "smpcg/seedmin.hpp"

using namespace smpcg;

TEST_CASE("method names round-trip") {
  for (auto m : {SequenceMethod::greedy, SequenceMethod::random, SequenceMethod::high_degree,
                 SequenceMethod::pagerank}) {
    CHECK(parse_sequence_method(to_string(m)) == m);
  }
  CHECK_FALSE(parse_sequence_method("degree"));
}

TEST_CASE("sampled oracle counts newly covered targets") {
  const ProbGraph g(4, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 2, 1.0}});
  const auto target = all_nodes(g);
  SampledCoverageOracle o(g, target, 10, RngStream(1));
  CHECK(o.marginal_gain(0) == 3.0);
  CHECK(o.marginal_count(0) == 30);
  o.add_seed(0);
  CHECK(o.value() == 3.0);
  CHECK(o.marginal_gain(3) == 1.0);
  CHECK(o.marginal_gain(0) == 0.0);
}

TEST_CASE("exact bipartite oracle matches closed forms") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const ProbGraph g = oracle::random_bipartite(gen, 2 + gen() % 5, 1 + gen() % 5, 0.5, 0.05, 1.0, true);
    const BipartiteGraph b = as_bipartite(g);
    const auto target = all_nodes(g);
    ExactBipartiteOracle o(b, target);
    std::vector<NodeId> seeds;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (gen() % 2) continue;
      const double before = o.value();
      const double gain = o.marginal_gain(v);
      o.add_seed(v);
      seeds.push_back(v);
      std::sort(seeds.begin(), seeds.end());
      const double expected = oracle::mean(oracle::bipartite_distribution(g, seeds, target));
      CHECK(o.value() == doctest::Approx(expected).epsilon(1e-12));
      CHECK(o.value() - before == doctest::Approx(gain).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: lazy greedy picks the same sequence as plain greedy") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbGraph g = assign_weighted_cascade(oracle::random_graph(gen, 10 + gen() % 30, 120));
    const auto target = all_nodes(g);
    GreedyConfig lazy, plain;
    lazy.samples = plain.samples = 64;
    plain.lazy = false;
    const auto a = greedy_ecg(g, target, lazy, RngStream(trial));
    const auto b = greedy_ecg(g, target, plain, RngStream(trial));
    CHECK(a.order == b.order);
    CHECK(a.gains == b.gains);
    CHECK(a.order.size() == g.node_count());
  }
  for (int trial = 0; trial < 20; ++trial) {
    const ProbGraph g = oracle::random_bipartite(gen, 2 + gen() % 8, 1 + gen() % 8, 0.4, 0.05, 1.0, true);
    const BipartiteGraph b = as_bipartite(g);
    std::vector<NodeId> target(b.right());
    ExactBipartiteOracle o1(b, target), o2(b, target);
    GreedyConfig lazy, plain;
    plain.lazy = false;
    CHECK(greedy_ecg(o1, lazy).order == greedy_ecg(o2, plain).order);
  }
}

TEST_CASE("greedy gains are nonincreasing and ties go to the lowest id") {
  // three identical stars
  const ProbGraph g(6, {{0, 3, 1.0}, {1, 4, 1.0}, {2, 5, 1.0}});
  const auto target = all_nodes(g);
  const auto seq = greedy_ecg(g, target, GreedyConfig{}, RngStream(1));
  CHECK(std::vector<NodeId>(seq.order.begin(), seq.order.begin() + 3) == std::vector<NodeId>{0, 1, 2});
  for (std::size_t i = 1; i < seq.gains.size(); ++i) CHECK(seq.gains[i] <= seq.gains[i - 1]);
}

TEST_CASE("expected-coverage stop and length cap") {
  const ProbGraph g(6, {{0, 3, 1.0}, {1, 4, 1.0}, {2, 5, 1.0}});
  const auto target = all_nodes(g);
  GreedyConfig c;
  c.stop_at_eta = true;
  c.eta = 3;
  c.inflation = 1.2;  // needs 3.6 -> two stars
  auto seq = greedy_ecg(g, target, c, RngStream(1));
  CHECK(seq.stop_index == std::size_t{2});
  CHECK(seq.order.size() == 2);
  c.eta = 0;
  CHECK(greedy_ecg(g, target, c, RngStream(1)).stop_index == std::size_t{0});
  GreedyConfig capped;
  capped.max_length = 4;
  CHECK(greedy_ecg(g, target, capped, RngStream(1)).order.size() == 4);
  GreedyConfig bad;
  bad.inflation = 0.5;
  CHECK_THROWS_AS(greedy_ecg(g, target, bad, RngStream(1)), Error);
}

TEST_CASE("property: binary search agrees with linear search on monotone predicates") {
  for (std::size_t len = 1; len < 40; ++len) {
    for (std::size_t k = 1; k <= len + 1; ++k) {
      auto pred = [k](std::size_t i) { return i >= k; };
      if (k > len) {
        CHECK_THROWS_AS(prefix_search(len, pred, SearchMode::linear), Error);
        CHECK_THROWS_AS(prefix_search(len, pred, SearchMode::binary), Error);
      } else {
        CHECK(prefix_search(len, pred, SearchMode::linear) == k);
        CHECK(prefix_search(len, pred, SearchMode::binary) == k);
      }
    }
  }
  // linear search returns the first hit even for a non-monotone predicate
  CHECK(prefix_search(10, [](std::size_t i) { return i == 3 || i >= 7; }) == 3);
}

namespace {

PcgInstance instance(const ProbGraph& g, std::vector<NodeId> target, std::size_t eta, double P) {
  PcgInstance inst;
  inst.graph = &g;
  inst.target = std::move(target);
  inst.eta = eta;
  inst.p_threshold = P;
  return inst;
}

}  // namespace

TEST_CASE("min_seed_pcg with the exact evaluator") {
  // three left nodes, each covering one right node w.p. 0.9; a fourth covers all w.p. 0.5
  const std::vector<BipartiteEdge> be{{0, 0, 0.9}, {1, 1, 0.9}, {2, 2, 0.9},
                                      {3, 0, 0.5}, {3, 1, 0.5}, {3, 2, 0.5}};
  const ProbGraph g = make_bipartite_graph(4, 3, be);
  const BipartiteGraph b = as_bipartite(g);
  const std::vector<NodeId> target(b.right());
  ExactBipartiteOracle o(b, target);
  const auto seq = greedy_ecg(o, GreedyConfig{});
  auto inst = instance(g, target, 2, 0.6);
  const auto cp = exact_bipartite_comp_prob(b, target, 2);
  const auto sol = min_seed_pcg(inst, 0.05, seq, cp);
  CHECK(sol.eps == 0.0);  // exact evaluator ignores eps
  CHECK(sol.achieved_prob >= 0.6);
  CHECK(sol.achieved_prob == cp.eval(sol.seeds));
  // the prefix before it falls short
  CHECK(cp.eval(seq.prefix(sol.seeds.size() - 1)) < 0.6);
  CHECK(min_seed_pcg(inst, 0.0, seq, cp, SearchMode::binary).seeds == sol.seeds);
}

TEST_CASE("min_seed_pcg preconditions and infeasibility") {
  const ProbGraph g(2, {{0, 1, 0.5}});
  const auto target = all_nodes(g);
  const SeedSequence seq = baseline_high_degree(g);
  const auto cp = monte_carlo_comp_prob(g, target, 1, 100, RngStream(1));
  CHECK_THROWS_AS(min_seed_pcg(instance(g, target, 1, 1.0), 0.0, seq, cp), Error);
  CHECK_THROWS_AS(min_seed_pcg(instance(g, target, 0, 0.5), 0.0, seq, cp), Error);
  CHECK_THROWS_AS(min_seed_pcg(instance(g, target, 2, 0.5), 0.0, seq, cp), Error);  // eta = |U|
  CHECK_THROWS_AS(min_seed_pcg(instance(g, target, 1, 0.5), 0.25, seq, cp), Error);
  // eta = 1 is met by any single seed
  CHECK(min_seed_pcg(instance(g, target, 1, 0.5), 0.0, seq, cp).seeds.size() == 1);

  const ProbGraph weak(3, {{0, 1, 0.1}});
  const std::vector<NodeId> t{1, 2};
  const auto cp2 = monte_carlo_comp_prob(weak, t, 1, 1000, RngStream(2));
  SeedSequence only_zero;
  only_zero.order = {0};
  try {
    (void)min_seed_pcg(instance(weak, t, 1, 0.5), 0.0, only_zero, cp2);
    FAIL("no error");
  } catch (const InfeasibleError& e) {
    CHECK(e.best_prob() < 0.2);
    CHECK(e.best_prob() > 0.0);
  }
}

TEST_CASE("full coverage needs the exact evaluator") {
  const std::vector<BipartiteEdge> be{{0, 0, 0.9}, {1, 1, 0.9}};
  const ProbGraph g = make_bipartite_graph(2, 2, be);
  const BipartiteGraph b = as_bipartite(g);
  const std::vector<NodeId> target(b.right());
  ExactBipartiteOracle o(b, target);
  const auto seq = greedy_ecg(o, GreedyConfig{});
  auto inst = instance(g, target, 2, 0.8);
  inst.allow_full_coverage = true;
  const auto sol = min_seed_pcg(inst, 0.0, seq, exact_bipartite_comp_prob(b, target, 2));
  // seeding a target node covers it outright, so greedy takes the right side first
  CHECK(sol.seeds == std::vector<NodeId>{2, 3});
  CHECK(sol.achieved_prob == 1.0);
  CHECK_THROWS_AS(
      min_seed_pcg(inst, 0.0, seq, monte_carlo_comp_prob(g, target, 2, 100, RngStream(1))), Error);
}

TEST_CASE("Monte Carlo evaluation is a function of the prefix size") {
  const ProbGraph g = generate_preferential_attachment(50, 2, 3);
  const auto target = all_nodes(g);
  const auto cp = monte_carlo_comp_prob(g, target, 10, 500, RngStream(4));
  const auto seq = baseline_high_degree(g);
  CHECK(cp.eval(seq.prefix(3)) == cp.eval(seq.prefix(3)));
  CHECK(cp.runs == 500);
  CHECK_FALSE(cp.exact);
}

TEST_CASE("baselines") {
  const ProbGraph g(5, {{0, 1, 0.5}, {2, 1, 0.5}, {2, 3, 0.5}, {2, 4, 0.5}, {4, 0, 0.5}});
  CHECK(baseline_high_degree(g).order == std::vector<NodeId>{2, 0, 4, 1, 3});
  const auto r1 = baseline_random(g, RngStream(9));
  const auto r2 = baseline_random(g, RngStream(9));
  CHECK(r1.order == r2.order);
  auto sorted = r1.order;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == all_nodes(g));
}

TEST_CASE("random orders are uniform over first positions") {
  const ProbGraph g(4, {});
  std::vector<int> first(4, 0);
  for (std::uint64_t s = 0; s < 4000; ++s) ++first[baseline_random(g, RngStream(s)).order[0]];
  for (int c : first) CHECK(std::abs(c - 1000) < 150);
}

TEST_CASE("PageRank against dense references") {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbGraph g = oracle::random_graph(gen, 2 + gen() % 40, 150);
    const auto pr = pagerank_scores(g);
    CHECK(pr.converged);
    const auto dense = oracle::dense_pagerank(g, 0.15, 1e-4);
    const auto fixed = oracle::pagerank_fixed_point(g, 0.15);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      CHECK(std::abs(pr.scores[i] - dense[i]) <= 1e-12);
      // the L1 stopping rule leaves at most tol * (1-r)/r error in L1
      CHECK(std::abs(pr.scores[i] - fixed[i]) <= 1e-4 * 0.85 / 0.15);
      sum += pr.scores[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("PageRank on a symmetric cycle is uniform") {
  const ProbGraph g(4, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}, {3, 0, 0.5}});
  const auto pr = pagerank_scores(g);
  for (double s : pr.scores) CHECK(s == doctest::Approx(0.25));
  CHECK_THROWS_AS(pagerank_scores(g, 0.0), Error);
  const auto capped = pagerank_scores(generate_preferential_attachment(30, 2, 1), 0.15, 0.0, 3);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 3);
}
