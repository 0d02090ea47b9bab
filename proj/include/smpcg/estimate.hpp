#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smpcg/diffusion.hpp"
#include "smpcg/graph.hpp"
#include "smpcg/rng.hpp"

namespace smpcg {

/// counts[j] = number of simulation runs whose coverage was exactly j.
struct CoverageHistogram {
  std::vector<std::uint64_t> counts;

  std::uint64_t runs() const noexcept;
  /// Runs with coverage >= eta.
  std::uint64_t at_least(std::size_t eta) const noexcept;

  friend bool operator==(const CoverageHistogram&, const CoverageHistogram&) = default;
};

enum class SimMode { trial, live_edge };

/// Monte Carlo kernels. Run i always draws from `base.substream(i)`, so the
/// serial and OpenMP versions return identical histograms for any thread
/// count. The serial versions are the reference the parallel ones are
/// tested against.
namespace kernels {

CoverageHistogram coverage_histogram_serial(const ProbGraph& graph, std::span<const NodeId> seeds,
                                            std::span<const NodeId> target, std::uint64_t runs,
                                            const RngStream& base, SimMode mode = SimMode::trial);

CoverageHistogram coverage_histogram_omp(const ProbGraph& graph, std::span<const NodeId> seeds,
                                         std::span<const NodeId> target, std::uint64_t runs,
                                         const RngStream& base, SimMode mode = SimMode::trial);

/// Exact Pr(Inf(S) = j) by enumerating all 2^|E| live-edge configurations.
/// Requires |E| <= 25 and n <= 64.
std::vector<double> enumerate_distribution_serial(const ProbGraph& graph,
                                                  std::span<const NodeId> seeds,
                                                  std::span<const NodeId> target);

std::vector<double> enumerate_distribution_omp(const ProbGraph& graph,
                                               std::span<const NodeId> seeds,
                                               std::span<const NodeId> target);

}  // namespace kernels

/// Empirical summary of Inf(S) over a batch of runs.
class CoverageStats {
 public:
  explicit CoverageStats(CoverageHistogram histogram);

  std::uint64_t runs() const noexcept { return histogram_.runs(); }
  double mean() const noexcept { return mean_; }
  /// Unbiased (divisor R - 1).
  double variance() const noexcept { return variance_; }
  double stddev() const noexcept;
  /// Fraction of runs with coverage >= eta.
  double tail_prob(std::size_t eta) const noexcept;
  const CoverageHistogram& histogram() const noexcept { return histogram_; }

 private:
  CoverageHistogram histogram_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

struct ExactDistribution {
  std::vector<double> probs;  // probs[j] = Pr(Inf(S) = j), j = 0..|U|

  double tail(std::size_t eta) const noexcept;
  double mean() const noexcept;
  double variance() const noexcept;
};

/// MC-CompProb[R]: fraction of `runs` simulations reaching coverage >= eta.
double mc_comp_prob(const ProbGraph& graph, std::span<const NodeId> target,
                    std::span<const NodeId> seeds, std::size_t eta, std::uint64_t runs,
                    const RngStream& rng);

/// ceil(ln(2 n^delta) / (2 eps^2)): runs that keep |estimate - truth| <= eps
/// with probability >= 1 - n^-delta.
std::uint64_t required_runs(std::uint64_t n, double delta, double eps);

double estimate_expected_coverage(const ProbGraph& graph, std::span<const NodeId> target,
                                  std::span<const NodeId> seeds, std::uint64_t samples,
                                  const RngStream& rng);

/// Throws Error(domain) for runs < 2.
CoverageStats coverage_stats(const ProbGraph& graph, std::span<const NodeId> target,
                             std::span<const NodeId> seeds, std::uint64_t runs,
                             const RngStream& rng);

/// Throws Error(too_large) above 25 edges.
ExactDistribution exact_distribution_bruteforce(const ProbGraph& graph,
                                                std::span<const NodeId> target,
                                                std::span<const NodeId> seeds);

inline constexpr std::size_t kMaxEnumerationEdges = 25;

}  // namespace smpcg
