#pragma once

// Generalized events and Pr-determinants.
//
// A generalized event is a formal rational combination of events on a finite
// sample space with the uniform measure. Two generalized events are equivalent
// exactly when they assign the same total weight to every sample point, so
// events are stored in that canonical form: one rational weight per point.
// Intersection acts bilinearly, which on weight vectors is the pointwise
// product.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "treeprob/core.hpp"
#include "treeprob/counting.hpp"

namespace treeprob {

/// A finite, nonempty sample space with the uniform measure. Spaces are
/// compared by identity: events built over different spaces never mix.
class SampleSpace {
 public:
  explicit SampleSpace(std::size_t size);
  std::size_t size() const noexcept { return size_; }

 private:
  std::size_t size_;
};

using SpacePtr = std::shared_ptr<const SampleSpace>;

SpacePtr make_space(std::size_t size);

class GeneralizedEvent {
 public:
  GeneralizedEvent(SpacePtr space, std::vector<Rational> weights);

  static GeneralizedEvent zero(SpacePtr space);
  static GeneralizedEvent full(SpacePtr space);
  /// Plain event {w : member[w]}.
  static GeneralizedEvent indicator(SpacePtr space, const std::vector<bool>& member);

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const Rational> weights() const noexcept { return weights_; }
  const Rational& weight(std::size_t point) const { return weights_.at(point); }
  /// True when every weight is 0 or 1.
  bool is_plain() const;
  bool is_zero() const;

  /// Equivalence of generalized events (same weight at every point).
  friend bool operator==(const GeneralizedEvent& a, const GeneralizedEvent& b);

 private:
  SpacePtr space_;
  std::vector<Rational> weights_;
};

GeneralizedEvent ge_add(const GeneralizedEvent& a, const GeneralizedEvent& b);
GeneralizedEvent ge_subtract(const GeneralizedEvent& a, const GeneralizedEvent& b);
GeneralizedEvent ge_scale(const GeneralizedEvent& a, const Rational& factor);
GeneralizedEvent ge_intersect(const GeneralizedEvent& a, const GeneralizedEvent& b);
/// Pr extended linearly: (sum of weights) / |space|.
Rational ge_probability(const GeneralizedEvent& a);

GeneralizedEvent operator+(const GeneralizedEvent& a, const GeneralizedEvent& b);
GeneralizedEvent operator-(const GeneralizedEvent& a, const GeneralizedEvent& b);
GeneralizedEvent operator-(const GeneralizedEvent& a);

/// Rectangular grid of generalized events over one space; 1-based indices.
class EventMatrix {
 public:
  /// Every entry starts as the zero event.
  EventMatrix(int rows, int cols, SpacePtr space);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  const SpacePtr& space() const noexcept { return space_; }

  const GeneralizedEvent& at(int i, int j) const;
  void set(int i, int j, GeneralizedEvent event);

  friend bool operator==(const EventMatrix& a, const EventMatrix& b);

 private:
  std::size_t index(int i, int j) const;

  int rows_;
  int cols_;
  SpacePtr space_;
  std::vector<GeneralizedEvent> entries_;
};

/// Sum over permutations pi of sign(pi) Pr(M_{1,pi(1)} cap ... cap M_{n,pi(n)}).
Rational pdet(const EventMatrix& m);

/// From an (n-1) x n matrix E: L_ij = -E_ij off the diagonal, L_ii = sum_{j != i} E_ij.
EventMatrix reduced_laplacian(const EventMatrix& e);

/// Spanning trees of the complete digraph on [n] oriented toward n, as endpoint
/// arrays (tree[i-1] is the head of the arc leaving i). n^(n-2) of them, in
/// Pruefer-sequence order. Valid for 2 <= n <= 7.
std::vector<std::vector<int>> enumerate_cayley_trees(int n);

/// Sum over rooted spanning trees T of Pr(cap_{(i,j) in T} E_ij).
Rational sum_tree_probabilities(const EventMatrix& e);

/// Determinant of a square rational matrix by exact elimination.
Rational determinant(std::vector<std::vector<Rational>> a);

/// The space of pairs (S, f) with S in S_{p,r} and f a surjection [k-1] -> [r].
/// Point index = tuple_index * assignment_count + assignment_index.
class PaperSpace {
 public:
  PaperSpace(OccupancyVector p, int r);

  const SpacePtr& space() const noexcept { return space_; }
  int k() const noexcept { return p_.k(); }
  int r() const noexcept { return r_; }
  const OccupancyVector& p() const noexcept { return p_; }
  std::size_t size() const noexcept { return space_->size(); }
  std::size_t tuple_count() const noexcept { return tuple_masks_.size() / static_cast<std::size_t>(r_); }
  std::size_t assignment_count() const noexcept { return assignments_.size() / static_cast<std::size_t>(k() - 1); }

  SubsetTuple tuple_at(std::size_t point) const;
  AssignmentMap assignment_at(std::size_t point) const;

  /// Raw mask of S_t at a point.
  std::uint32_t subset_bits(std::size_t point, int t) const;
  /// f(i) at a point.
  int target(std::size_t point, int i) const;

  /// Events over this space from a per-point predicate / weight.
  template <class Pred>
  GeneralizedEvent indicator(Pred&& pred) const {
    std::vector<Rational> w(size());
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = pred(x) ? 1 : 0;
    return GeneralizedEvent(space_, std::move(w));
  }

 private:
  OccupancyVector p_;
  int r_;
  SpacePtr space_;
  std::vector<std::uint32_t> tuple_masks_;  // tuple_count x r
  std::vector<int> assignments_;            // assignment_count x (k-1)
};

/// Throws std::domain_error when the space would be empty.
PaperSpace build_paper_space(const OccupancyVector& p, int r);

/// Superscript of an I/J event: a fixed subset index t, or f(vertex) read at
/// each sample point.
struct SubsetRef {
  enum class Kind { fixed, assigned };
  Kind kind;
  int value;

  static SubsetRef fixed(int t) { return {Kind::fixed, t}; }
  static SubsetRef assigned_to(int vertex) { return {Kind::assigned, vertex}; }
};

/// I_{i,j}^t = {]i,j] subset of S_t}; indices are read cyclically modulo k.
GeneralizedEvent event_I(const PaperSpace& space, int i, int j, SubsetRef t);
/// J_{i,j}^t = I_{i,j}^t for i != j (mod k), and {S_t = [k]} for i = j.
GeneralizedEvent event_J(const PaperSpace& space, int i, int j, SubsetRef t);

/// (k-1) x (k-1) matrices equivalent to the reduced Laplacians; alpha, beta, gamma only.
EventMatrix matrix_L_prime(ArcRule rule, const PaperSpace& space);
/// k x k matrices with last row all full-space; every rule.
EventMatrix matrix_M(ArcRule rule, const PaperSpace& space);
/// M'_beta: rows J_{i,j} for i < k, then a full-space row.
EventMatrix matrix_M_beta_prime(const PaperSpace& space);

/// Stage matrices of the row-by-row expansion of M_alpha (a in [1, k]) and
/// M'_beta (a in [1, k-1]).
EventMatrix matrix_M_a(ArcRule rule, int a, const PaperSpace& space);
/// The matrices peeled off at each stage: alpha and beta, a in [2, k-1].
EventMatrix matrix_N_a(ArcRule rule, int a, const PaperSpace& space);

/// Q^(a), a in [1, k]: rows J_{i,j+1}^{f(i)} above a, full-space row a,
/// rows J_{i,j+1}^{f(i-1)} below a.
EventMatrix matrix_Q_a(int a, const PaperSpace& space);
/// M^D for D a subset of [k-1]: rows J_{i-1,j}^{f(i)} for i in D, I_{i,j}^{f(i)} otherwise.
EventMatrix matrix_M_D(const SubsetMask& d, const PaperSpace& space);

}  // namespace treeprob
