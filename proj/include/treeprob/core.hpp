#pragma once

// Ground types for random digraphs built from tuples of subsets of [k].
//
// Conventions: every vertex and ground-set element is 1-based, element j of
// [k] lives in bit j-1 of a SubsetMask, and all cyclic arithmetic is modulo k
// with representatives in [1, k].

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treeprob {

inline constexpr int kMaxGroundSize = 20;

/// Maps any integer onto its representative in [1, k].
constexpr int wrap(int v, int k) noexcept {
  int m = (v - 1) % k;
  if (m < 0) m += k;
  return m + 1;
}

/// A subset of [k] stored as a k-bit mask.
class SubsetMask {
 public:
  SubsetMask(int k, std::uint32_t bits);

  static SubsetMask empty(int k) { return SubsetMask(k, 0); }
  static SubsetMask full(int k);
  static SubsetMask of(int k, std::initializer_list<int> elements);
  static SubsetMask of(int k, std::span<const int> elements);

  int k() const noexcept { return k_; }
  std::uint32_t bits() const noexcept { return bits_; }

  bool contains(int j) const noexcept { return (bits_ >> (j - 1)) & 1u; }
  int size() const noexcept { return std::popcount(bits_); }
  bool is_empty() const noexcept { return bits_ == 0; }
  bool is_full() const noexcept { return bits_ == full_bits(k_); }
  bool is_subset_of(const SubsetMask& other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }
  SubsetMask complement() const noexcept {
    return SubsetMask(k_, ~bits_ & full_bits(k_), Unchecked{});
  }
  std::vector<int> elements() const;

  static constexpr std::uint32_t full_bits(int k) noexcept {
    return k >= 32 ? ~0u : ((1u << k) - 1u);
  }

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;

 private:
  struct Unchecked {};
  SubsetMask(int k, std::uint32_t bits, Unchecked) : bits_(bits), k_(k) {}

  std::uint32_t bits_;
  int k_;
};

std::string to_string(const SubsetMask& s);

/// p = (p_1, ..., p_k): how many subsets of a tuple contain each element.
class OccupancyVector {
 public:
  explicit OccupancyVector(std::vector<int> counts);

  int k() const noexcept { return static_cast<int>(counts_.size()); }
  /// 1-based access: count(j) = p_j.
  int count(int j) const { return counts_.at(static_cast<std::size_t>(j - 1)); }
  std::span<const int> values() const noexcept { return counts_; }

  friend bool operator==(const OccupancyVector&, const OccupancyVector&) = default;

 private:
  std::vector<int> counts_;
};

std::string to_string(const OccupancyVector& p);

/// An ordered tuple (S_1, ..., S_r) of subsets of a common ground set [k].
class SubsetTuple {
 public:
  SubsetTuple(int k, std::vector<SubsetMask> subsets);

  int k() const noexcept { return k_; }
  int r() const noexcept { return static_cast<int>(subsets_.size()); }
  /// 1-based: subset(t) = S_t.
  const SubsetMask& subset(int t) const { return subsets_.at(static_cast<std::size_t>(t - 1)); }
  std::span<const SubsetMask> subsets() const noexcept { return subsets_; }

  /// True iff no S_t equals [k].
  bool is_proper() const noexcept;

  friend bool operator==(const SubsetTuple&, const SubsetTuple&) = default;

 private:
  int k_;
  std::vector<SubsetMask> subsets_;
};

std::string to_string(const SubsetTuple& tuple);

OccupancyVector occupancy(const SubsetTuple& tuple);

enum class AssignmentMode { surjection, function, identity };

std::string_view mode_name(AssignmentMode mode) noexcept;
std::optional<AssignmentMode> parse_mode(std::string_view name) noexcept;

/// A map f from [k-1] to [r] selecting which subset drives each arc.
class AssignmentMap {
 public:
  /// values[i-1] = f(i); every value must lie in [1, r].
  AssignmentMap(std::vector<int> values, int r, AssignmentMode mode);

  static AssignmentMap identity(int k);

  int domain_size() const noexcept { return static_cast<int>(values_.size()); }
  int r() const noexcept { return r_; }
  AssignmentMode mode() const noexcept { return mode_; }
  int operator()(int i) const { return values_.at(static_cast<std::size_t>(i - 1)); }
  std::span<const int> values() const noexcept { return values_; }

  friend bool operator==(const AssignmentMap&, const AssignmentMap&) = default;

 private:
  std::vector<int> values_;
  int r_;
  AssignmentMode mode_;
};

enum class ArcRule { alpha, beta, gamma, delta };

inline constexpr std::array<ArcRule, 4> kAllRules = {ArcRule::alpha, ArcRule::beta,
                                                     ArcRule::gamma, ArcRule::delta};
inline constexpr std::array<ArcRule, 3> kTheoremRules = {ArcRule::alpha, ArcRule::beta,
                                                         ArcRule::gamma};

std::string_view rule_name(ArcRule rule) noexcept;
std::optional<ArcRule> parse_rule(std::string_view name) noexcept;

struct Arc {
  int origin;
  int endpoint;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Digraph on [k] with exactly one arc a_i = (i, endpoint(i)) per i in [k-1].
/// Loops (endpoint == origin) are representable.
class Digraph {
 public:
  Digraph(int k, std::vector<int> endpoints);

  int k() const noexcept { return k_; }
  int endpoint(int i) const { return endpoints_.at(static_cast<std::size_t>(i - 1)); }
  std::span<const int> endpoints() const noexcept { return endpoints_; }
  std::vector<Arc> arcs() const;
  bool has_loop() const noexcept;

 private:
  int k_;
  std::vector<int> endpoints_;
};

/// ]i, j] = {i+1, ..., j} read cyclically in [k].
SubsetMask cyclic_interval(int i, int j, int k);

int map_alpha(int i, const SubsetMask& s);
int map_beta(int i, const SubsetMask& s);
int map_gamma(int i, const SubsetMask& s);
int map_delta(int i, const SubsetMask& s);
int apply_rule(ArcRule rule, int i, const SubsetMask& s);

Digraph build_digraph(const SubsetTuple& tuple, const AssignmentMap& f, ArcRule rule);

bool is_rooted_tree(const Digraph& g);
/// True iff every cycle of g is a loop.
bool is_pseudoforest(const Digraph& g);

namespace detail {

// Hot-path variants over an endpoint array (endpoints[i-1] is the head of a_i).
// Vertex k is the sink.
inline bool endpoints_form_tree(std::span<const int> endpoints, int k) noexcept {
  // 0 = unseen, 1 = on current walk, 2 = known to reach k
  std::array<std::uint8_t, kMaxGroundSize + 1> state{};
  state[static_cast<std::size_t>(k)] = 2;
  for (int start = 1; start < k; ++start) {
    int v = start;
    while (state[static_cast<std::size_t>(v)] == 0) {
      state[static_cast<std::size_t>(v)] = 1;
      v = endpoints[static_cast<std::size_t>(v - 1)];
    }
    if (state[static_cast<std::size_t>(v)] == 1) return false;
    for (v = start; state[static_cast<std::size_t>(v)] == 1;
         v = endpoints[static_cast<std::size_t>(v - 1)]) {
      state[static_cast<std::size_t>(v)] = 2;
    }
  }
  return true;
}

inline bool endpoints_form_pseudoforest(std::span<const int> endpoints, int k) noexcept {
  std::array<std::uint8_t, kMaxGroundSize + 1> state{};
  state[static_cast<std::size_t>(k)] = 2;
  for (int i = 1; i < k; ++i) {
    if (endpoints[static_cast<std::size_t>(i - 1)] == i) state[static_cast<std::size_t>(i)] = 2;
  }
  for (int start = 1; start < k; ++start) {
    int v = start;
    while (state[static_cast<std::size_t>(v)] == 0) {
      state[static_cast<std::size_t>(v)] = 1;
      v = endpoints[static_cast<std::size_t>(v - 1)];
    }
    if (state[static_cast<std::size_t>(v)] == 1) return false;
    for (v = start; state[static_cast<std::size_t>(v)] == 1;
         v = endpoints[static_cast<std::size_t>(v - 1)]) {
      state[static_cast<std::size_t>(v)] = 2;
    }
  }
  return true;
}

}  // namespace detail

}  // namespace treeprob
