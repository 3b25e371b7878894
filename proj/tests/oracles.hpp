#pragma once

// Slow reference implementations used only by the tests. Each one is written
// from the defining property rather than from the library's algorithm.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "treeprob/core.hpp"
#include "treeprob/counting.hpp"
#include "treeprob/events.hpp"

namespace oracle {

using Set = std::set<int>;

inline int cyc(int v, int k) { return ((v - 1) % k + k) % k + 1; }

inline Set interval(int i, int j, int k) {
  Set out;
  for (int v = cyc(i, k); v != cyc(j, k);) {
    v = cyc(v + 1, k);
    out.insert(v);
  }
  return out;
}

inline bool subset(const Set& a, const Set& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline Set to_set(std::uint32_t bits, int k) {
  Set s;
  for (int j = 1; j <= k; ++j) {
    if ((bits >> (j - 1)) & 1u) s.insert(j);
  }
  return s;
}

// the unique j outside S with ]i, j-1] inside S
inline int alpha(int i, const Set& s, int k) {
  if (static_cast<int>(s.size()) == k) return i;
  for (int j = 1; j <= k; ++j) {
    if (!s.count(j) && subset(interval(i, j - 1, k), s)) return j;
  }
  return -1;
}

// the j with j+1 outside S and ]i, j] inside S
inline int beta(int i, const Set& s, int k) {
  if (static_cast<int>(s.size()) == k) return i;
  for (int j = 1; j <= k; ++j) {
    if (!s.count(cyc(j + 1, k)) && subset(interval(i, j, k), s)) return j;
  }
  return -1;
}

inline int gamma(int i, const Set& s, int k) {
  if (static_cast<int>(s.size()) == k) return i;
  if (s.count(i)) return cyc(i - 1, k);
  return beta(i, s, k);
}

inline int delta(int i, const Set& s, int k) {
  if (s.count(i)) return i;
  return alpha(i, s, k);
}

inline int rule(treeprob::ArcRule z, int i, const Set& s, int k) {
  switch (z) {
    case treeprob::ArcRule::alpha: return alpha(i, s, k);
    case treeprob::ArcRule::beta: return beta(i, s, k);
    case treeprob::ArcRule::gamma: return gamma(i, s, k);
    case treeprob::ArcRule::delta: return delta(i, s, k);
  }
  return -1;
}

// k-1 arcs on k vertices with no undirected cycle form a spanning tree, and
// since only k has no out-arc, it is oriented toward k.
inline bool is_tree(const std::vector<int>& endpoints, int k) {
  std::vector<int> parent(static_cast<std::size_t>(k + 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };
  for (int i = 1; i < k; ++i) {
    const int a = find(i);
    const int b = find(endpoints[static_cast<std::size_t>(i - 1)]);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

inline bool is_pseudoforest(const std::vector<int>& endpoints, int k) {
  auto next = [&](int v) { return v == k ? k : endpoints[static_cast<std::size_t>(v - 1)]; };
  for (int v = 1; v < k; ++v) {
    int u = v;
    for (int step = 0; step < k; ++step) u = next(u);
    if (u != k && next(u) != u) return false;
  }
  return true;
}

struct TupleCounts {
  std::int64_t all = 0;
  std::int64_t proper = 0;
};

// Every tuple in (2^[k])^r, tallied by occupancy vector.
inline std::map<std::vector<int>, TupleCounts> tally_all_tuples(int k, int r) {
  std::map<std::vector<int>, TupleCounts> out;
  const std::uint32_t full = (1u << k) - 1;
  std::vector<std::uint32_t> t(static_cast<std::size_t>(r), 0);
  while (true) {
    std::vector<int> p(static_cast<std::size_t>(k), 0);
    bool proper = true;
    for (std::uint32_t m : t) {
      if (m == full) proper = false;
      for (int j = 0; j < k; ++j) p[static_cast<std::size_t>(j)] += (m >> j) & 1u;
    }
    auto& c = out[p];
    ++c.all;
    if (proper) ++c.proper;
    std::size_t pos = 0;
    while (pos < t.size() && t[pos] == full) t[pos++] = 0;
    if (pos == t.size()) break;
    ++t[pos];
  }
  return out;
}

// Coefficient of x^p in (prod_j (x_j + 1) - prod_j x_j)^r, by repeated
// multiplication of a dense coefficient table.
inline std::int64_t polynomial_count(const std::vector<int>& p, int r) {
  const int k = static_cast<int>(p.size());
  for (int pj : p) {
    if (pj < 0 || pj > r) return 0;
  }
  const int base = r + 1;
  std::size_t cells = 1;
  for (int j = 0; j < k; ++j) cells *= static_cast<std::size_t>(base);
  std::vector<std::int64_t> poly(cells, 0);
  poly[0] = 1;
  const std::uint32_t full = (1u << k) - 1;
  for (int step = 0; step < r; ++step) {
    std::vector<std::int64_t> next(cells, 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      if (poly[idx] == 0) continue;
      for (std::uint32_t t = 0; t < full; ++t) {
        std::size_t target = 0;
        std::size_t stride = 1;
        std::size_t rest = idx;
        bool ok = true;
        for (int j = 0; j < k; ++j) {
          const int e = static_cast<int>(rest % static_cast<std::size_t>(base)) +
                        static_cast<int>((t >> j) & 1u);
          rest /= static_cast<std::size_t>(base);
          if (e > r) {
            ok = false;
            break;
          }
          target += static_cast<std::size_t>(e) * stride;
          stride *= static_cast<std::size_t>(base);
        }
        if (ok) next[target] += poly[idx];
      }
    }
    poly.swap(next);
  }
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (int j = 0; j < k; ++j) {
    idx += static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) * stride;
    stride *= static_cast<std::size_t>(base);
  }
  return poly[idx];
}

inline int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t a = 0; a < perm.size(); ++a) {
    for (std::size_t b = a + 1; b < perm.size(); ++b) inversions += perm[a] > perm[b];
  }
  return inversions % 2 == 0 ? 1 : -1;
}

// Pdet as the average over sample points of the ordinary determinant of the
// pointwise weight matrix.
inline treeprob::Rational pdet(const treeprob::EventMatrix& m) {
  const int n = m.rows();
  const std::size_t size = m.space()->size();
  treeprob::Rational total = 0;
  for (std::size_t x = 0; x < size; ++x) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    do {
      treeprob::Rational term = permutation_sign(perm);
      for (int i = 1; i <= n && term != 0; ++i) {
        term *= m.at(i, perm[static_cast<std::size_t>(i - 1)]).weight(x);
      }
      total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return total / treeprob::Rational(static_cast<long>(size));
}

// Every endpoint array in [n]^(n-1) that forms a tree.
inline std::vector<std::vector<int>> cayley_trees(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n - 1), 1);
  while (true) {
    if (is_tree(e, n)) out.push_back(e);
    std::size_t pos = 0;
    while (pos < e.size() && e[pos] == n) e[pos++] = 1;
    if (pos == e.size()) break;
    ++e[pos];
  }
  return out;
}

inline bool surjective(const std::vector<int>& f, int r) {
  std::vector<bool> hit(static_cast<std::size_t>(r + 1), false);
  for (int v : f) hit[static_cast<std::size_t>(v)] = true;
  return std::count(hit.begin() + 1, hit.end(), true) == r;
}

// Pr(tree | proper tuple) by walking every tuple of subsets and every
// surjection [k-1] -> [r], using the reference rules and union-find.
inline treeprob::Rational tree_probability(treeprob::ArcRule z, const std::vector<int>& p, int r) {
  const int k = static_cast<int>(p.size());
  const std::uint32_t full = (1u << k) - 1;
  std::vector<std::vector<int>> maps;
  std::vector<int> f(static_cast<std::size_t>(k - 1), 1);
  while (true) {
    if (surjective(f, r)) maps.push_back(f);
    std::size_t pos = 0;
    while (pos < f.size() && f[pos] == r) f[pos++] = 1;
    if (pos == f.size()) break;
    ++f[pos];
  }
  std::int64_t good = 0;
  std::int64_t total = 0;
  std::vector<std::uint32_t> t(static_cast<std::size_t>(r), 0);
  while (true) {
    std::vector<int> occ(static_cast<std::size_t>(k), 0);
    bool proper = true;
    for (std::uint32_t m : t) {
      if (m == full) proper = false;
      for (int j = 0; j < k; ++j) occ[static_cast<std::size_t>(j)] += (m >> j) & 1u;
    }
    if (proper && occ == p) {
      for (const auto& g : maps) {
        std::vector<int> e(static_cast<std::size_t>(k - 1));
        for (int i = 1; i < k; ++i) {
          e[static_cast<std::size_t>(i - 1)] =
              rule(z, i, to_set(t[static_cast<std::size_t>(g[static_cast<std::size_t>(i - 1)] - 1)], k), k);
        }
        good += is_tree(e, k);
        ++total;
      }
    }
    std::size_t pos = 0;
    while (pos < t.size() && t[pos] == full) t[pos++] = 0;
    if (pos == t.size()) break;
    ++t[pos];
  }
  return treeprob::make_rational(treeprob::BigCount(static_cast<long>(good)),
                                treeprob::BigCount(static_cast<long>(total)));
}

}  // namespace oracle
