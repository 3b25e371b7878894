#pragma once

// Exact enumeration and counting of subset tuples and assignment maps, and
// exact tree probabilities of the random digraphs they generate.
//
// All arithmetic here is exact: counts are BigCount (GMP integers) and
// probabilities are Rational (canonical GMP rationals).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "treeprob/core.hpp"

namespace treeprob {

using BigCount = mpz_class;
using Rational = mpq_class;

/// Canonical num/den; throws std::domain_error on a zero denominator.
Rational make_rational(const BigCount& num, const BigCount& den);
/// Always "num/den", including integers ("1/1", "0/1").
std::string to_string(const Rational& q);
/// Accepts "num/den" or a bare integer.
Rational parse_rational(std::string_view text);

/// C(n, m), zero when m < 0 or m > n.
BigCount binomial(int n, int m);

/// Walks the tuples of S_{p,r} (or M_{p,r} when proper_only) exactly once each.
///
/// Order: lexicographic over the per-element membership sets, element 1
/// outermost; each element's membership set is an r-bit mask with p_j bits set,
/// visited in increasing numeric order.
class TupleEnumerator {
 public:
  TupleEnumerator(const OccupancyVector& p, int r, bool proper_only);

  /// Advances to the next tuple; false once the stream is exhausted.
  bool next();

  /// Raw masks (bit j-1 set iff j in S_t) of the current tuple, indexed t-1.
  std::span<const std::uint32_t> masks() const noexcept { return masks_; }
  SubsetTuple current() const;

 private:
  bool advance_odometer();
  void rebuild_masks();

  int k_;
  int r_;
  bool proper_only_;
  bool started_ = false;
  bool exhausted_ = false;
  std::vector<std::vector<std::uint32_t>> choices_;  // per element: membership masks over [r]
  std::vector<std::size_t> position_;
  std::vector<std::uint32_t> masks_;
};

void for_each_tuple(const OccupancyVector& p, int r, bool proper_only,
                    const std::function<void(const SubsetTuple&)>& visit);
std::vector<SubsetTuple> enumerate_tuples(const OccupancyVector& p, int r, bool proper_only);

/// |S_{p,r}| = prod_j C(r, p_j).
BigCount cardinality_S(const OccupancyVector& p, int r);
/// |M_{p,r}| = sum_s (-1)^s C(r,s) prod_j C(r-s, p_j-s).
BigCount cardinality_M(const OccupancyVector& p, int r);
/// Same count for a possibly-negative q and r >= 0: zero when any q_j < 0, and
/// M_{q,0} holds only the empty tuple, present iff q = 0.
BigCount cardinality_M(std::span<const int> q, int r);

/// Walks assignment maps [k-1] -> [r] of the given class; element 1 outermost,
/// targets in increasing order.
class AssignmentEnumerator {
 public:
  AssignmentEnumerator(int k, int r, AssignmentMode mode);

  bool next();
  std::span<const int> values() const noexcept { return values_; }
  AssignmentMap current() const;

 private:
  bool step();
  bool accepted() const;

  int k_;
  int r_;
  AssignmentMode mode_;
  bool started_ = false;
  bool exhausted_ = false;
  std::vector<int> values_;
};

std::vector<AssignmentMap> enumerate_assignments(int k, int r, AssignmentMode mode);
BigCount count_assignments(int k, int r, AssignmentMode mode);

/// Throws std::domain_error when the mode admits no map [k-1] -> [r].
void check_assignment_feasible(int k, int r, AssignmentMode mode);

/// Favourable and total (tuple, map) pairs of an exact enumeration.
struct PairCount {
  BigCount favorable;
  BigCount total;
};

enum class DigraphEvent { rooted_tree, pseudoforest };

/// Counts pairs (tuple, f) over S_{p,r} (or M_{p,r}) x maps for which the digraph has the event.
PairCount count_digraph_pairs(ArcRule rule, const OccupancyVector& p, int r, AssignmentMode mode,
                              bool proper_only, DigraphEvent event);

/// Pr(G is a rooted tree | S in M_{p,r}); std::domain_error if M_{p,r} is empty.
Rational exact_tree_probability(ArcRule rule, const OccupancyVector& p, int r,
                                AssignmentMode mode = AssignmentMode::surjection);
/// Same probability with S uniform over all of S_{p,r}.
Rational exact_unconditioned_tree_probability(ArcRule rule, const OccupancyVector& p, int r,
                                              AssignmentMode mode = AssignmentMode::surjection);
/// Pr(every cycle of G is a loop | S in M_{p,r}).
Rational exact_pseudoforest_probability(ArcRule rule, const OccupancyVector& p, int r,
                                        AssignmentMode mode = AssignmentMode::surjection);

/// Pr(predicate(S) | S in M_{p,r}) by enumeration.
Rational conditional_tuple_probability(const OccupancyVector& p, int r,
                                       const std::function<bool(const SubsetTuple&)>& predicate);

/// Closed forms for alpha, beta and gamma. Throws std::invalid_argument for delta.
Rational theorem_prediction(ArcRule rule, const OccupancyVector& p, int r);
/// |M_{p,r-1}| / |M_{p,r}|, the conjectured tree probability under delta.
Rational conjecture1_prediction(const OccupancyVector& p, int r);
/// theorem_prediction for alpha/beta/gamma, conjecture1_prediction for delta.
Rational predicted_tree_probability(ArcRule rule, const OccupancyVector& p, int r);

struct ProbabilityModeReport {
  ArcRule zeta;
  OccupancyVector p;
  int r;
  AssignmentMode mode;
  Rational exact;
  Rational predicted;
  bool match;
};

ProbabilityModeReport probability_report(ArcRule rule, const OccupancyVector& p, int r,
                                         AssignmentMode mode);

/// All p in [0, r]^k in lexicographic order (p_1 outermost).
std::vector<OccupancyVector> occupancy_grid(int k, int r);

}  // namespace treeprob
