// The OpenMP kernels must reproduce their serial references exactly.

#include <doctest.h>
#include <omp.h>

#include <random>

#include "oracles.hpp"
#include "smpcg/estimate.hpp"

using namespace smpcg;

namespace {

struct ThreadCount {
  explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("histograms are identical for every thread count") {
  const ProbGraph g = generate_preferential_attachment(300, 3, 9);
  const auto target = all_nodes(g);
  const std::vector<NodeId> seeds{0, 5, 17};
  for (SimMode mode : {SimMode::trial, SimMode::live_edge}) {
    const auto ref = kernels::coverage_histogram_serial(g, seeds, target, 777, RngStream(3), mode);
    CHECK(ref.runs() == 777);
    for (int threads : {1, 2, 3, 8}) {
      ThreadCount tc(threads);
      CHECK(kernels::coverage_histogram_omp(g, seeds, target, 777, RngStream(3), mode) == ref);
    }
  }
}

TEST_CASE("trial and live-edge modes agree in distribution") {
  const ProbGraph g = generate_preferential_attachment(80, 2, 4);
  const auto target = all_nodes(g);
  const std::vector<NodeId> seeds{1, 2};
  const CoverageStats a(
      kernels::coverage_histogram_omp(g, seeds, target, 20000, RngStream(1), SimMode::trial));
  const CoverageStats b(
      kernels::coverage_histogram_omp(g, seeds, target, 20000, RngStream(2), SimMode::live_edge));
  const double se = std::sqrt((a.variance() + b.variance()) / 20000.0);
  CHECK(std::abs(a.mean() - b.mean()) < 6 * se);
}

TEST_CASE("enumeration: parallel matches serial") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbGraph g = oracle::random_graph(gen, 4 + gen() % 12, 22);
    const auto target = all_nodes(g);
    const std::vector<NodeId> seeds{0};
    const auto ref = kernels::enumerate_distribution_serial(g, seeds, target);
    for (int threads : {1, 4}) {
      ThreadCount tc(threads);
      const auto par = kernels::enumerate_distribution_omp(g, seeds, target);
      REQUIRE(par.size() == ref.size());
      for (std::size_t j = 0; j < ref.size(); ++j) CHECK(par[j] == doctest::Approx(ref[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("enumeration sums to one") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbGraph g = oracle::random_graph(gen, 3 + gen() % 15, 20);
    const auto target = all_nodes(g);
    const std::vector<NodeId> seeds{1};
    double s = 0.0;
    for (double p : kernels::enumerate_distribution_omp(g, seeds, target)) s += p;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}
