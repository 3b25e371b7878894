#pragma once

// Unchecked arc-rule kernels on raw masks. Callers guarantee 1 <= i <= k and
// that bits only uses the low k bits.

#include <cstdint>

#include "treeprob/core.hpp"

namespace treeprob::detail {

inline bool has(std::uint32_t bits, int j) noexcept { return (bits >> (j - 1)) & 1u; }

/// Bits of ]i, j] in [k].
inline std::uint32_t interval_bits(int i, int j, int k) noexcept {
  std::uint32_t bits = 0;
  for (int v = i; v != j;) {
    v = wrap(v + 1, k);
    bits |= 1u << (v - 1);
  }
  return bits;
}

// First element outside S met walking forward from i+1.
inline int alpha(int i, std::uint32_t bits, int k) noexcept {
  if (bits == SubsetMask::full_bits(k)) return i;
  int j = wrap(i + 1, k);
  while (has(bits, j)) j = wrap(j + 1, k);
  return j;
}

// Last element of the run inside S starting at i+1 (i itself when i+1 is outside S).
inline int beta(int i, std::uint32_t bits, int k) noexcept {
  if (bits == SubsetMask::full_bits(k)) return i;
  int j = i;
  while (has(bits, wrap(j + 1, k))) j = wrap(j + 1, k);
  return j;
}

inline int gamma(int i, std::uint32_t bits, int k) noexcept {
  if (bits == SubsetMask::full_bits(k)) return i;
  if (has(bits, i)) return wrap(i - 1, k);
  return beta(i, bits, k);
}

inline int delta(int i, std::uint32_t bits, int k) noexcept {
  if (has(bits, i)) return i;
  return alpha(i, bits, k);
}

inline int rule_endpoint(ArcRule rule, int i, std::uint32_t bits, int k) noexcept {
  switch (rule) {
    case ArcRule::alpha: return alpha(i, bits, k);
    case ArcRule::beta: return beta(i, bits, k);
    case ArcRule::gamma: return gamma(i, bits, k);
    case ArcRule::delta: return delta(i, bits, k);
  }
  return i;
}

}  // namespace treeprob::detail
