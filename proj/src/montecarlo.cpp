#include "treeprob/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rule_kernels.hpp"
#include "treeprob/counting.hpp"

namespace treeprob {

namespace philox {

namespace {

constexpr std::uint32_t kMultiplier0 = 0xD2511F53;
constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Counter block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMultiplier0, ctr[0], hi0, lo0);
    mulhilo(kMultiplier1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

}  // namespace philox

RandomStream::result_type RandomStream::operator()() noexcept {
  if (used_ == 4) {
    const philox::Counter ctr = {static_cast<std::uint32_t>(block_),
                                 static_cast<std::uint32_t>(block_ >> 32),
                                 static_cast<std::uint32_t>(stream_),
                                 static_cast<std::uint32_t>(stream_ >> 32)};
    const philox::Key key = {static_cast<std::uint32_t>(seed_),
                             static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox::block(ctr, key);
    ++block_;
    used_ = 0;
  }
  return buffer_[static_cast<std::size_t>(used_++)];
}

std::uint64_t uniform_below(RandomStream& rng, std::uint64_t n) {
  constexpr std::uint64_t kRange = std::uint64_t{1} << 32;
  if (n == 0 || n > kRange) throw std::invalid_argument("uniform_below needs 1 <= n <= 2^32");
  // Largest multiple of n not above 2^32; draws at or beyond it are rejected.
  const std::uint64_t limit = kRange - kRange % n;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

namespace {

// Floyd's algorithm: uniform m-subset of [0, r) as an r-bit mask.
std::uint32_t sample_membership(int r, int m, RandomStream& rng) {
  std::uint32_t chosen = 0;
  for (int j = r - m; j < r; ++j) {
    const auto t = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j) + 1));
    chosen |= ((chosen >> t) & 1u) ? (1u << j) : (1u << t);
  }
  return chosen;
}

void check_tuple_sampling(const OccupancyVector& p, int r, bool proper_only) {
  if (r < 1) throw std::domain_error("sampling needs r >= 1");
  for (int pj : p.values()) {
    if (pj > r) {
      throw std::domain_error("infeasible occupancy " + to_string(p) + " for r=" +
                              std::to_string(r));
    }
  }
  if (proper_only && cardinality_M(p, r) == 0) {
    throw std::domain_error("M_{p,r} is empty for p=" + to_string(p) + ", r=" +
                            std::to_string(r));
  }
}

// Fills masks (size r) with a uniform tuple; returns false once the rejection bound is spent.
bool draw_tuple(std::span<const int> p, int r, bool proper_only, RandomStream& rng,
                std::span<std::uint32_t> masks) {
  const int k = static_cast<int>(p.size());
  const std::uint32_t full = SubsetMask::full_bits(k);
  for (std::uint64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::fill(masks.begin(), masks.end(), 0u);
    for (int j = 0; j < k; ++j) {
      const std::uint32_t member = sample_membership(r, p[static_cast<std::size_t>(j)], rng);
      for (int t = 0; t < r; ++t) {
        if ((member >> t) & 1u) masks[static_cast<std::size_t>(t)] |= 1u << j;
      }
    }
    if (!proper_only ||
        std::none_of(masks.begin(), masks.end(), [full](std::uint32_t m) { return m == full; })) {
      return true;
    }
  }
  return false;
}

bool draw_assignment(int k, int r, AssignmentMode mode, RandomStream& rng,
                     std::span<int> values) {
  if (mode == AssignmentMode::identity) {
    for (int i = 1; i < k; ++i) values[static_cast<std::size_t>(i - 1)] = i;
    return true;
  }
  const std::uint32_t all = SubsetMask::full_bits(r);
  for (std::uint64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::uint32_t hit = 0;
    for (auto& v : values) {
      v = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(r))) + 1;
      hit |= 1u << (v - 1);
    }
    if (mode == AssignmentMode::function || hit == all) return true;
  }
  return false;
}

}  // namespace

SubsetTuple sample_tuple(const OccupancyVector& p, int r, RandomStream& rng, bool proper_only) {
  check_tuple_sampling(p, r, proper_only);
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(r));
  if (!draw_tuple(p.values(), r, proper_only, rng, masks)) {
    throw std::domain_error("tuple rejection sampling exceeded its attempt bound");
  }
  std::vector<SubsetMask> subsets;
  for (std::uint32_t m : masks) subsets.emplace_back(p.k(), m);
  return SubsetTuple(p.k(), std::move(subsets));
}

AssignmentMap sample_assignment(int k, int r, RandomStream& rng, AssignmentMode mode) {
  check_assignment_feasible(k, r, mode);
  std::vector<int> values(static_cast<std::size_t>(k - 1));
  if (!draw_assignment(k, r, mode, rng, values)) {
    throw std::domain_error("assignment rejection sampling exceeded its attempt bound");
  }
  return AssignmentMap(std::move(values), r, mode);
}

Estimate estimate_tree_probability(ArcRule rule, const OccupancyVector& p, int r,
                                   AssignmentMode mode, std::uint64_t trials, std::uint64_t seed,
                                   unsigned jobs) {
  if (trials == 0) throw std::invalid_argument("estimate needs at least one trial");
  const int k = p.k();
  check_assignment_feasible(k, r, mode);
  check_tuple_sampling(p, r, true);

  const std::uint64_t streams = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
  std::vector<std::uint64_t> hits(streams, 0);
  std::atomic<std::uint64_t> next_stream{0};
  std::atomic<bool> exhausted{false};

  auto worker = [&] {
    std::vector<std::uint32_t> masks(static_cast<std::size_t>(r));
    std::vector<int> f(static_cast<std::size_t>(k - 1));
    std::vector<int> endpoints(static_cast<std::size_t>(k - 1));
    for (std::uint64_t s = next_stream++; s < streams; s = next_stream++) {
      RandomStream rng(seed, s);
      const std::uint64_t begin = s * kTrialsPerStream;
      const std::uint64_t count = std::min(kTrialsPerStream, trials - begin);
      std::uint64_t tally = 0;
      for (std::uint64_t n = 0; n < count; ++n) {
        if (!draw_tuple(p.values(), r, true, rng, masks) ||
            !draw_assignment(k, r, mode, rng, f)) {
          exhausted = true;
          return;
        }
        for (int i = 1; i < k; ++i) {
          endpoints[static_cast<std::size_t>(i - 1)] = detail::rule_endpoint(
              rule, i, masks[static_cast<std::size_t>(f[static_cast<std::size_t>(i - 1)] - 1)], k);
        }
        if (detail::endpoints_form_tree(endpoints, k)) ++tally;
      }
      hits[s] = tally;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(streams)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (exhausted) throw std::domain_error("rejection sampling exceeded its attempt bound");

  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  const double mean = static_cast<double>(total) / static_cast<double>(trials);
  return {mean, std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials)), trials, seed};
}

}  // namespace treeprob
