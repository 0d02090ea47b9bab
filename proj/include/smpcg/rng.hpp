#pragma once

#include <cstdint>
#include <limits>

namespace smpcg {

/// Counter-based random stream keyed by (seed, stream index).
///
/// Output k of a stream is a SplitMix64 finalizer applied to
/// `key + k * golden`, so any stream can be re-created from its key and
/// child streams are derived without touching the parent's position. This
/// is what makes Monte Carlo batches reproducible regardless of how runs are
/// spread over OpenMP threads: run i always draws from `base.substream(i)`.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream), key_(derive_key(seed, stream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// True with probability p; p = 1 always fires, p = 0 never does.
  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Unbiased integer in [0, bound) (Lemire's multiply-shift rejection).
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound == 0) return 0;
    __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Independent child stream; does not advance this stream.
  RngStream substream(std::uint64_t index) const noexcept {
    return RngStream(key_, index);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            std::uint64_t stream) noexcept {
    return mix(seed ^ mix(stream * kGolden + 0x2545F4914F6CDD1DULL));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace smpcg
