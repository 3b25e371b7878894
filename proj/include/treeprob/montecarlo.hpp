#pragma once

// Seeded sampling of tuples and assignment maps, and Monte Carlo estimates of
// tree probabilities. Estimates are the only floating-point values in the
// library and never feed back into exact computations.
//
// Random numbers come from Philox4x32-10 (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3", SC'11) used as a counter-based stream:
//   key     = (seed low 32 bits, seed high 32 bits)
//   counter = (block low, block high, stream low, stream high)
// Each block yields four 32-bit words, consumed in order. A stream id selects
// an independent substream, which is how trials are split across tasks.
// Generator version tag: kGeneratorName.

#include <array>
#include <cstdint>
#include <string_view>

#include "treeprob/core.hpp"

namespace treeprob {

inline constexpr std::string_view kGeneratorName = "philox4x32-10/v1";

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Ten-round Philox4x32 bijection of one counter block under a key.
Counter block(Counter counter, Key key) noexcept;

}  // namespace philox

/// UniformRandomBitGenerator over 32-bit words.
class RandomStream {
 public:
  using result_type = std::uint32_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  /// Independent substream with the same seed.
  RandomStream split(std::uint64_t stream) const noexcept { return RandomStream(seed_, stream); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  philox::Counter buffer_{};
  int used_ = 4;
};

/// Uniform integer in [0, n) by rejection; n must lie in [1, 2^32].
std::uint64_t uniform_below(RandomStream& rng, std::uint64_t n);

inline constexpr std::uint64_t kMaxRejections = 1'000'000;

/// Uniform over S_{p,r} (each element independently picks a uniform p_j-subset
/// of [r] as its membership set); rejection-resampled into M_{p,r} when
/// proper_only. Throws std::domain_error if the target set is empty or the
/// rejection bound is exhausted.
SubsetTuple sample_tuple(const OccupancyVector& p, int r, RandomStream& rng, bool proper_only);

/// Uniform map [k-1] -> [r] of the given class; surjections by rejection.
AssignmentMap sample_assignment(int k, int r, RandomStream& rng, AssignmentMode mode);

struct Estimate {
  double mean;
  double std_error;  // sqrt(mean (1 - mean) / trials)
  std::uint64_t trials;
  std::uint64_t seed;
};

/// Trials per substream; substream c covers trials [c * kTrialsPerStream, ...).
inline constexpr std::uint64_t kTrialsPerStream = 8192;

/// Fraction of sampled (S, f), S uniform in M_{p,r}, whose digraph is a rooted
/// tree. Deterministic in (arguments, seed); the result does not depend on jobs.
Estimate estimate_tree_probability(ArcRule rule, const OccupancyVector& p, int r,
                                   AssignmentMode mode, std::uint64_t trials, std::uint64_t seed,
                                   unsigned jobs = 1);

}  // namespace treeprob
