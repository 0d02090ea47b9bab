#include "smpcg/estimate.hpp"

#include <cmath>
#include <numeric>

#include "smpcg/error.hpp"

namespace smpcg {

std::uint64_t CoverageHistogram::runs() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t CoverageHistogram::at_least(std::size_t eta) const noexcept {
  std::uint64_t t = 0;
  for (std::size_t j = eta; j < counts.size(); ++j) t += counts[j];
  return t;
}

CoverageStats::CoverageStats(CoverageHistogram histogram) : histogram_(std::move(histogram)) {
  const std::uint64_t r = histogram_.runs();
  if (r == 0) return;
  long double sum = 0.0L;
  for (std::size_t j = 0; j < histogram_.counts.size(); ++j) {
    sum += static_cast<long double>(j) * histogram_.counts[j];
  }
  const long double mean = sum / r;
  long double ss = 0.0L;
  for (std::size_t j = 0; j < histogram_.counts.size(); ++j) {
    const long double d = static_cast<long double>(j) - mean;
    ss += d * d * histogram_.counts[j];
  }
  mean_ = static_cast<double>(mean);
  variance_ = r > 1 ? static_cast<double>(ss / (r - 1)) : 0.0;
}

double CoverageStats::stddev() const noexcept { return std::sqrt(variance_); }

double CoverageStats::tail_prob(std::size_t eta) const noexcept {
  const std::uint64_t r = runs();
  if (r == 0) return 0.0;
  return static_cast<double>(histogram_.at_least(eta)) / static_cast<double>(r);
}

double ExactDistribution::tail(std::size_t eta) const noexcept {
  double t = 0.0;
  // summed from the top so small tails keep their relative precision
  for (std::size_t j = probs.size(); j-- > eta;) t += probs[j];
  return t;
}

double ExactDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) m += static_cast<double>(j) * probs[j];
  return m;
}

double ExactDistribution::variance() const noexcept {
  const double m = mean();
  double v = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    const double d = static_cast<double>(j) - m;
    v += d * d * probs[j];
  }
  return v;
}

double mc_comp_prob(const ProbGraph& graph, std::span<const NodeId> target,
                    std::span<const NodeId> seeds, std::size_t eta, std::uint64_t runs,
                    const RngStream& rng) {
  if (runs == 0) throw Error(ErrorKind::domain, "mc_comp_prob needs R >= 1");
  const auto h = kernels::coverage_histogram_omp(graph, seeds, target, runs, rng);
  return static_cast<double>(h.at_least(eta)) / static_cast<double>(runs);
}

std::uint64_t required_runs(std::uint64_t n, double delta, double eps) {
  if (n == 0) throw Error(ErrorKind::domain, "required_runs needs n >= 1");
  if (!(eps > 0.0)) throw Error(ErrorKind::domain, "required_runs needs eps > 0");
  if (!(delta > 0.0)) throw Error(ErrorKind::domain, "required_runs needs delta > 0");
  const double runs =
      (std::log(2.0) + delta * std::log(static_cast<double>(n))) / (2.0 * eps * eps);
  return static_cast<std::uint64_t>(std::ceil(runs));
}

double estimate_expected_coverage(const ProbGraph& graph, std::span<const NodeId> target,
                                  std::span<const NodeId> seeds, std::uint64_t samples,
                                  const RngStream& rng) {
  if (samples == 0) throw Error(ErrorKind::domain, "expected coverage needs samples >= 1");
  return CoverageStats(kernels::coverage_histogram_omp(graph, seeds, target, samples, rng)).mean();
}

CoverageStats coverage_stats(const ProbGraph& graph, std::span<const NodeId> target,
                             std::span<const NodeId> seeds, std::uint64_t runs,
                             const RngStream& rng) {
  if (runs < 2) throw Error(ErrorKind::domain, "coverage_stats needs runs >= 2");
  return CoverageStats(kernels::coverage_histogram_omp(graph, seeds, target, runs, rng));
}

ExactDistribution exact_distribution_bruteforce(const ProbGraph& graph,
                                                std::span<const NodeId> target,
                                                std::span<const NodeId> seeds) {
  return ExactDistribution{kernels::enumerate_distribution_omp(graph, seeds, target)};
}

}  // namespace smpcg
