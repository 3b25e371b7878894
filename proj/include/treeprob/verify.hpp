#pragma once

// Exhaustive parameter-grid suites. Every cell compares two exact rationals;
// a cell passes iff they are equal. Conjecture suites are labelled "evidence":
// a failing cell there is a counterexample, reported like any other result.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treeprob/core.hpp"
#include "treeprob/counting.hpp"

namespace treeprob {

enum class CellStatus { pass, fail, skipped_infeasible };

std::string_view status_name(CellStatus status) noexcept;

struct GridCell {
  std::string zeta;   // rule name, or "-" when the check involves no rule
  std::string check;  // which identity this cell tests
  int k = 0;
  int r = 0;
  std::vector<int> p;
  Rational lhs;
  Rational rhs;
  CellStatus status = CellStatus::skipped_infeasible;
};

struct GridSummary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
};

struct GridReport {
  std::string suite;
  std::string kind;  // "verification" or "evidence"
  std::vector<std::pair<std::string, std::string>> grid;
  std::vector<GridCell> cells;

  GridSummary summary() const;
  bool all_passed() const { return summary().fail == 0; }
};

/// Compares lhs and rhs exactly.
GridCell make_cell(std::string zeta, std::string check, int k, int r, std::vector<int> p,
                   Rational lhs, Rational rhs);
GridCell skipped_cell(std::string zeta, std::string check, int k, int r, std::vector<int> p);

struct GridOptions {
  int k_min = 2;
  int k_max = 4;
  int r_max = 0;  // 0 means k-1
  AssignmentMode mode = AssignmentMode::surjection;
  unsigned jobs = 1;
};

/// Exact tree probability against the closed forms for alpha, beta, gamma, and
/// (r >= 2) against the equivalent single-subset events: k not in S_1,
/// S_1 = {2..k}, |S_1| = k-1.
GridReport verify_theorem(const GridOptions& options);

/// Brute-force delta tree probability against |M_{p,r-1}|/|M_{p,r}| and Pr(S_1 = {} | M).
GridReport verify_conjecture1(const GridOptions& options);

/// Pdet(M^D) against (|M|/|S|) Pr(k not in S_1, D subset of S_1 | M) for every D,
/// plus the inclusion-exclusion roll-up to the delta determinant.
GridReport verify_conjecture2(const GridOptions& options);

/// Direct Pr-determinant evaluation of every determinantal identity behind the
/// closed forms (L', M, the alpha/beta stage decompositions, the gamma Q^(a) sum,
/// and the delta determinant).
GridReport verify_pdet_lemmas(const GridOptions& options);

/// Randomized probabilistic matrix-tree checks plus independent-event cases
/// compared with the numeric Laplacian determinant.
GridReport verify_prop1(std::size_t trials, std::uint64_t seed);

}  // namespace treeprob
