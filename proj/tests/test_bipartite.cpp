#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smpcg/bipartite.hpp"
#include "smpcg/error.hpp"

using namespace smpcg;

namespace {

BipartiteGraph bip(std::size_t left, std::size_t right, std::vector<BipartiteEdge> edges) {
  return as_bipartite(make_bipartite_graph(left, right, edges));
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an smpcg::Error");
  return ErrorKind::config;
}

}  // namespace

TEST_CASE("DP table by hand") {
  const std::vector<double> p{0.5, 0.5};
  const DpTable t(p);
  CHECK(t.size() == 2);
  CHECK(t.at(0, 0) == 1.0);
  CHECK(t.at(1, 0) == 0.5);
  CHECK(t.at(1, 1) == 0.5);
  CHECK(t.at(2, 0) == 0.25);
  CHECK(t.at(2, 1) == 0.5);
  CHECK(t.at(2, 2) == 0.25);
  CHECK(t.tail(0) == 1.0);
  CHECK(t.tail(1) == 0.75);
  CHECK(t.tail(2) == 0.25);
  CHECK_THROWS_AS((void)t.tail(3), Error);
  CHECK(coverage_distribution(p) == std::vector<double>{0.25, 0.5, 0.25});
  CHECK(coverage_tail(p, 2) == 0.25);
}

TEST_CASE("property: DP rows match brute-force enumeration of outcomes") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(1 + gen() % 12);
    for (double& x : p) x = gen() % 8 == 0 ? double(gen() % 2) : u(gen);
    const DpTable t(p);
    for (std::size_t i = 0; i <= p.size(); ++i) {
      const auto brute = oracle::poisson_binomial(std::span<const double>(p).first(i));
      for (std::size_t j = 0; j <= i; ++j) CHECK(t.at(i, j) == doctest::Approx(brute[j]).epsilon(1e-12));
    }
    const auto last = coverage_distribution(p);
    for (std::size_t j = 0; j <= p.size(); ++j) CHECK(last[j] == doctest::Approx(t.at(p.size(), j)).epsilon(1e-14));
  }
}

TEST_CASE("bi_comp_prob and friends") {
  // a -> x (0.5), b -> x (0.5), b -> y (1)
  const BipartiteGraph b = bip(2, 2, {{0, 0, 0.5}, {1, 0, 0.5}, {1, 1, 1.0}});
  const std::vector<NodeId> sa{0}, sb{1}, sab{0, 1};
  CHECK(activation_probs(b, sab, Model::ic) == std::vector<double>{0.75, 1.0});
  CHECK(bi_comp_prob(b, sa, 1) == 0.5);
  CHECK(bi_comp_prob(b, sb, 2) == 0.5);
  CHECK(bi_comp_prob(b, sab, 2) == 0.75);
  CHECK(expected_coverage_exact(b, sab) == 1.75);
  CHECK(full_coverage_prob(b, sab) == 0.75);
  CHECK(bi_comp_prob(b, sab, 2, Model::lt) == 1.0);
  const std::vector<NodeId> right_seed{2};
  CHECK(kind_of([&] { (void)bi_comp_prob(b, right_seed, 1); }) == ErrorKind::domain);
  CHECK(kind_of([&] { (void)bi_comp_prob(b, sa, 3); }) == ErrorKind::domain);
}

TEST_CASE("target activation with seeds anywhere") {
  const BipartiteGraph b = bip(2, 2, {{0, 0, 0.5}, {1, 1, 0.25}});
  const std::vector<NodeId> seeds{0, 3};
  const std::vector<NodeId> target{0, 1, 2, 3};
  CHECK(target_activation_probs(b, seeds, target, Model::ic) ==
        std::vector<double>{1.0, 0.0, 0.5, 1.0});
}

TEST_CASE("coverage guaranteed at a confidence level") {
  // three independent 0.5 activations: tails 1, 0.875, 0.5, 0.125
  const std::vector<double> p{0.5, 0.5, 0.5};
  CHECK(max_coverage_at_confidence(p, 0.8) == 1);
  CHECK(max_coverage_at_confidence(p, 0.5) == 2);
  CHECK(max_coverage_at_confidence(p, 0.1) == 3);
  const std::vector<double> none{0.0};
  CHECK(max_coverage_at_confidence(none, 0.5) == 0);
}

TEST_CASE("greedy set cover") {
  // 0 covers {x}, 1 covers {x, y}, 2 covers {z}, 3 covers {z}
  const BipartiteGraph b =
      bip(4, 3, {{0, 0, 0.1}, {1, 0, 0.1}, {1, 1, 0.1}, {2, 2, 0.1}, {3, 2, 0.1}});
  CHECK(greedy_set_cover(b) == std::vector<NodeId>{1, 2});

  std::vector<BipartiteEdge> e{{0, 0, 0.5}};
  const ProbGraph g(3, {{0, 1, 0.5}});
  // node 2 is isolated and lands on the left, so every right node is coverable
  CHECK(greedy_set_cover(as_bipartite(g)) == std::vector<NodeId>{0});
}

TEST_CASE("g_value") {
  const BipartiteGraph b = bip(3, 2, {{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 1.0}, {2, 1, 0.5}});
  const std::vector<NodeId> s1{0}, none;
  CHECK(g_value(b, s1, none) == 0.0);
  const std::vector<NodeId> x1{1};
  // x goes 0.5 -> 1
  CHECK(g_value(b, s1, x1) == doctest::Approx(std::log(2.0)));
  const std::vector<NodeId> x12{1, 2};
  CHECK(g_value(b, s1, x12) == doctest::Approx(std::log(2.0) + std::log(0.75 / 0.5)));
  const std::vector<NodeId> lone{1};
  CHECK(kind_of([&] { (void)g_value(b, lone, none); }) == ErrorKind::log_domain);
  const std::vector<NodeId> overlap{0};
  CHECK(kind_of([&] { (void)g_value(b, s1, overlap); }) == ErrorKind::domain);
}

TEST_CASE("g_value reaches -log f(S1) when X certainly activates everything") {
  const BipartiteGraph b = bip(3, 2, {{0, 0, 0.3}, {0, 1, 0.6}, {1, 0, 1.0}, {2, 1, 1.0}});
  const std::vector<NodeId> s1{0}, x{1, 2};
  CHECK(g_value(b, s1, x) == doctest::Approx(-std::log(full_coverage_prob(b, s1))));
}

TEST_CASE("property: g is monotone and submodular") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t left = 2 + gen() % 4, right = 1 + gen() % 4;
    const ProbGraph g = oracle::random_bipartite(gen, left, right, 0.6, 0.05, 1.0, true);
    const BipartiteGraph b = as_bipartite(g);
    const auto s1 = greedy_set_cover(b);
    std::vector<NodeId> rest;
    for (NodeId v : b.left()) {
      if (std::find(s1.begin(), s1.end(), v) == s1.end()) rest.push_back(v);
    }
    const std::size_t r = rest.size();
    for (std::uint32_t m2 = 0; m2 < (1u << r); ++m2) {
      for (std::uint32_t m1 = m2;; m1 = (m1 - 1) & m2) {  // m1 ⊆ m2
        std::vector<NodeId> t1, t2;
        for (std::size_t i = 0; i < r; ++i) {
          if ((m1 >> i) & 1) t1.push_back(rest[i]);
          if ((m2 >> i) & 1) t2.push_back(rest[i]);
        }
        const double g1 = g_value(b, s1, t1), g2 = g_value(b, s1, t2);
        CHECK(g1 <= g2 + 1e-12);
        for (std::size_t i = 0; i < r; ++i) {
          if ((m2 >> i) & 1) continue;
          auto t1u = t1, t2u = t2;
          t1u.push_back(rest[i]);
          t2u.push_back(rest[i]);
          std::sort(t1u.begin(), t1u.end());
          std::sort(t2u.begin(), t2u.end());
          CHECK(g_value(b, s1, t1u) - g1 >= g_value(b, s1, t2u) - g2 - 1e-12);
        }
        if (m1 == 0) break;
      }
    }
  }
}

TEST_CASE("two-stage: one cover node already suffices") {
  const BipartiteGraph b = bip(2, 2, {{0, 0, 0.9}, {0, 1, 0.9}, {1, 0, 0.9}, {1, 1, 0.9}});
  const auto r = two_stage_full_coverage(b, 0.8);
  CHECK(r.s1 == std::vector<NodeId>{0});
  CHECK(r.s2.empty());
  CHECK(r.success_prob == doctest::Approx(0.81));
  CHECK(r.seeds() == std::vector<NodeId>{0});

  const auto strict = two_stage_full_coverage(b, 0.9);
  CHECK(strict.seeds() == std::vector<NodeId>{0, 1});
  CHECK(strict.success_prob == doctest::Approx(0.99 * 0.99));
}

TEST_CASE("two-stage: errors") {
  const BipartiteGraph weak = bip(1, 1, {{0, 0, 0.5}});
  CHECK_THROWS_AS(two_stage_full_coverage(weak, 0.8), InfeasibleError);
  CHECK(kind_of([&] { (void)two_stage_full_coverage(weak, 1.0); }) == ErrorKind::domain);
  const BipartiteGraph zero = bip(2, 1, {{0, 0, 0.0}, {1, 0, 0.5}});
  CHECK(kind_of([&] { (void)two_stage_full_coverage(zero, 0.4); }) == ErrorKind::domain);
}

TEST_CASE("property: two-stage output always meets the threshold") {
  std::mt19937_64 gen(31);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t left = 1 + gen() % 6, right = 1 + gen() % 6;
    const ProbGraph g = oracle::random_bipartite(gen, left, right, 0.5, 0.3, 1.0, true);
    const BipartiteGraph b = as_bipartite(g);
    const double P = 0.1 + 0.8 * std::uniform_real_distribution<double>()(gen);
    for (StageTwoStop stop : {StageTwoStop::exact, StageTwoStop::relaxed}) {
      try {
        const auto r = two_stage_full_coverage(b, P, Model::ic, stop);
        ++feasible;
        const auto seeds = r.seeds();
        CHECK(r.success_prob >= P);
        CHECK(r.success_prob == full_coverage_prob(b, seeds));
        double direct = 1.0;
        for (NodeId v : b.right()) direct *= oracle::one_hop_ic(g, seeds, v);
        CHECK(direct == doctest::Approx(r.success_prob).epsilon(1e-12));
      } catch (const InfeasibleError& e) {
        CHECK(full_coverage_prob(b, b.left()) < P);
      }
    }
  }
  CHECK(feasible > 50);
}
