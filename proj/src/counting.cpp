#include "treeprob/counting.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "rule_kernels.hpp"

namespace treeprob {

namespace {

constexpr int kMaxTupleLength = 20;

void check_tuple_length(int r) {
  if (r < 0 || r > kMaxTupleLength) {
    throw std::invalid_argument("tuple length r must lie in [0, " +
                                std::to_string(kMaxTupleLength) + "], got " + std::to_string(r));
  }
}

bool is_digit_string(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](unsigned char c) { return std::isdigit(c) != 0; });
}

// r-bit masks with exactly m bits set, ascending.
std::vector<std::uint32_t> combinations(int r, int m) {
  std::vector<std::uint32_t> out;
  if (m < 0 || m > r) return out;
  if (m == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint64_t limit = std::uint64_t{1} << r;
  std::uint64_t v = (std::uint64_t{1} << m) - 1;
  while (v < limit) {
    out.push_back(static_cast<std::uint32_t>(v));
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t n = v + c;
    v = (((n ^ v) >> 2) / c) | n;
  }
  return out;
}

void require_nonempty_M(const OccupancyVector& p, int r) {
  if (cardinality_M(p, r) == 0) {
    throw std::domain_error("conditioning on empty event: M_{p,r} is empty for p=" +
                            to_string(p) + ", r=" + std::to_string(r));
  }
}

Rational ratio(const PairCount& c) { return make_rational(c.favorable, c.total); }

}  // namespace

Rational make_rational(const BigCount& num, const BigCount& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                         : text.substr(slash + 1);
  std::string_view digits = (!num.empty() && num.front() == '-') ? num.substr(1) : num;
  if (!is_digit_string(digits) || !is_digit_string(den)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  return make_rational(BigCount(std::string(num)), BigCount(std::string(den)));
}

BigCount binomial(int n, int m) {
  if (n < 0 || m < 0 || m > n) return 0;
  BigCount out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
  return out;
}

TupleEnumerator::TupleEnumerator(const OccupancyVector& p, int r, bool proper_only)
    : k_(p.k()), r_(r), proper_only_(proper_only) {
  check_tuple_length(r);
  choices_.reserve(static_cast<std::size_t>(k_));
  for (int pj : p.values()) {
    choices_.push_back(combinations(r, pj));
    if (choices_.back().empty()) exhausted_ = true;
  }
  position_.assign(static_cast<std::size_t>(k_), 0);
  masks_.assign(static_cast<std::size_t>(r), 0);
}

void TupleEnumerator::rebuild_masks() {
  std::fill(masks_.begin(), masks_.end(), 0u);
  for (int j = 0; j < k_; ++j) {
    const std::uint32_t member = choices_[static_cast<std::size_t>(j)][position_[static_cast<std::size_t>(j)]];
    for (int t = 0; t < r_; ++t) {
      if ((member >> t) & 1u) masks_[static_cast<std::size_t>(t)] |= 1u << j;
    }
  }
}

bool TupleEnumerator::advance_odometer() {
  for (int j = k_ - 1; j >= 0; --j) {
    auto& pos = position_[static_cast<std::size_t>(j)];
    if (++pos < choices_[static_cast<std::size_t>(j)].size()) return true;
    pos = 0;
  }
  return false;
}

bool TupleEnumerator::next() {
  if (exhausted_) return false;
  const std::uint32_t full = SubsetMask::full_bits(k_);
  while (true) {
    if (!started_) {
      started_ = true;
    } else if (!advance_odometer()) {
      exhausted_ = true;
      return false;
    }
    rebuild_masks();
    if (!proper_only_ ||
        std::none_of(masks_.begin(), masks_.end(), [full](std::uint32_t m) { return m == full; })) {
      return true;
    }
  }
}

SubsetTuple TupleEnumerator::current() const {
  std::vector<SubsetMask> subsets;
  subsets.reserve(masks_.size());
  for (std::uint32_t m : masks_) subsets.emplace_back(k_, m);
  return SubsetTuple(k_, std::move(subsets));
}

void for_each_tuple(const OccupancyVector& p, int r, bool proper_only,
                    const std::function<void(const SubsetTuple&)>& visit) {
  TupleEnumerator e(p, r, proper_only);
  while (e.next()) visit(e.current());
}

std::vector<SubsetTuple> enumerate_tuples(const OccupancyVector& p, int r, bool proper_only) {
  std::vector<SubsetTuple> out;
  for_each_tuple(p, r, proper_only, [&](const SubsetTuple& s) { out.push_back(s); });
  return out;
}

BigCount cardinality_S(const OccupancyVector& p, int r) {
  check_tuple_length(r);
  BigCount out = 1;
  for (int pj : p.values()) out *= binomial(r, pj);
  return out;
}

BigCount cardinality_M(const OccupancyVector& p, int r) { return cardinality_M(p.values(), r); }

BigCount cardinality_M(std::span<const int> q, int r) {
  check_tuple_length(r);
  if (std::any_of(q.begin(), q.end(), [](int v) { return v < 0; })) return 0;
  BigCount total = 0;
  for (int s = 0; s <= r; ++s) {
    BigCount term = binomial(r, s);
    for (int qj : q) {
      term *= binomial(r - s, qj - s);
      if (term == 0) break;
    }
    if (s % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

void check_assignment_feasible(int k, int r, AssignmentMode mode) {
  if (k < 2) throw std::domain_error("assignment maps need k >= 2");
  if (r < 1) throw std::domain_error("assignment maps need r >= 1");
  if (mode == AssignmentMode::surjection && r > k - 1) {
    throw std::domain_error("no surjection from [" + std::to_string(k - 1) + "] onto [" +
                            std::to_string(r) + "]");
  }
  if (mode == AssignmentMode::identity && r != k - 1) {
    throw std::domain_error("identity assignment needs r = k-1 = " + std::to_string(k - 1) +
                            ", got r = " + std::to_string(r));
  }
}

AssignmentEnumerator::AssignmentEnumerator(int k, int r, AssignmentMode mode)
    : k_(k), r_(r), mode_(mode) {
  check_assignment_feasible(k, r, mode);
  if (mode == AssignmentMode::identity) {
    values_.resize(static_cast<std::size_t>(k - 1));
    for (int i = 1; i < k; ++i) values_[static_cast<std::size_t>(i - 1)] = i;
  } else {
    values_.assign(static_cast<std::size_t>(k - 1), 1);
  }
}

bool AssignmentEnumerator::step() {
  for (int i = k_ - 2; i >= 0; --i) {
    auto& v = values_[static_cast<std::size_t>(i)];
    if (++v <= r_) return true;
    v = 1;
  }
  return false;
}

bool AssignmentEnumerator::accepted() const {
  if (mode_ != AssignmentMode::surjection) return true;
  std::uint32_t hit = 0;
  for (int v : values_) hit |= 1u << (v - 1);
  return hit == SubsetMask::full_bits(r_);
}

bool AssignmentEnumerator::next() {
  if (exhausted_) return false;
  if (mode_ == AssignmentMode::identity) {
    exhausted_ = started_;
    started_ = true;
    return !exhausted_;
  }
  while (true) {
    if (!started_) {
      started_ = true;
    } else if (!step()) {
      exhausted_ = true;
      return false;
    }
    if (accepted()) return true;
  }
}

AssignmentMap AssignmentEnumerator::current() const {
  return AssignmentMap(values_, r_, mode_);
}

std::vector<AssignmentMap> enumerate_assignments(int k, int r, AssignmentMode mode) {
  std::vector<AssignmentMap> out;
  AssignmentEnumerator e(k, r, mode);
  while (e.next()) out.push_back(e.current());
  return out;
}

BigCount count_assignments(int k, int r, AssignmentMode mode) {
  check_assignment_feasible(k, r, mode);
  BigCount out;
  switch (mode) {
    case AssignmentMode::identity:
      return 1;
    case AssignmentMode::function:
      mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(r),
                    static_cast<unsigned long>(k - 1));
      return out;
    case AssignmentMode::surjection:
      out = 0;
      for (int t = 0; t <= r; ++t) {
        BigCount power;
        mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(r - t),
                      static_cast<unsigned long>(k - 1));
        BigCount term = binomial(r, t) * power;
        if (t % 2 == 0) {
          out += term;
        } else {
          out -= term;
        }
      }
      return out;
  }
  return out;
}

PairCount count_digraph_pairs(ArcRule rule, const OccupancyVector& p, int r, AssignmentMode mode,
                              bool proper_only, DigraphEvent event) {
  const int k = p.k();
  check_assignment_feasible(k, r, mode);
  const auto arcs = static_cast<std::size_t>(k - 1);

  std::vector<int> maps;
  std::size_t map_count = 0;
  for (AssignmentEnumerator e(k, r, mode); e.next(); ++map_count) {
    maps.insert(maps.end(), e.values().begin(), e.values().end());
  }

  std::vector<int> table(static_cast<std::size_t>(r) * arcs);
  std::vector<int> endpoints(arcs);
  std::uint64_t favorable = 0;
  std::uint64_t tuples = 0;
  TupleEnumerator tuple_stream(p, r, proper_only);
  while (tuple_stream.next()) {
    ++tuples;
    const auto masks = tuple_stream.masks();
    for (int t = 0; t < r; ++t) {
      for (int i = 1; i < k; ++i) {
        table[static_cast<std::size_t>(t) * arcs + static_cast<std::size_t>(i - 1)] =
            detail::rule_endpoint(rule, i, masks[static_cast<std::size_t>(t)], k);
      }
    }
    for (std::size_t m = 0; m < map_count; ++m) {
      const int* f = maps.data() + m * arcs;
      for (std::size_t i = 0; i < arcs; ++i) {
        endpoints[i] = table[static_cast<std::size_t>(f[i] - 1) * arcs + i];
      }
      const bool hit = event == DigraphEvent::rooted_tree
                           ? detail::endpoints_form_tree(endpoints, k)
                           : detail::endpoints_form_pseudoforest(endpoints, k);
      if (hit) ++favorable;
    }
  }
  PairCount out;
  out.favorable = BigCount(std::to_string(favorable));
  out.total = BigCount(std::to_string(tuples)) * static_cast<unsigned long>(map_count);
  return out;
}

Rational exact_tree_probability(ArcRule rule, const OccupancyVector& p, int r,
                                AssignmentMode mode) {
  check_assignment_feasible(p.k(), r, mode);
  require_nonempty_M(p, r);
  return ratio(count_digraph_pairs(rule, p, r, mode, true, DigraphEvent::rooted_tree));
}

Rational exact_unconditioned_tree_probability(ArcRule rule, const OccupancyVector& p, int r,
                                              AssignmentMode mode) {
  check_assignment_feasible(p.k(), r, mode);
  if (cardinality_S(p, r) == 0) {
    throw std::domain_error("conditioning on empty event: S_{p,r} is empty");
  }
  return ratio(count_digraph_pairs(rule, p, r, mode, false, DigraphEvent::rooted_tree));
}

Rational exact_pseudoforest_probability(ArcRule rule, const OccupancyVector& p, int r,
                                        AssignmentMode mode) {
  check_assignment_feasible(p.k(), r, mode);
  require_nonempty_M(p, r);
  return ratio(count_digraph_pairs(rule, p, r, mode, true, DigraphEvent::pseudoforest));
}

Rational conditional_tuple_probability(const OccupancyVector& p, int r,
                                       const std::function<bool(const SubsetTuple&)>& predicate) {
  require_nonempty_M(p, r);
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  for_each_tuple(p, r, true, [&](const SubsetTuple& s) {
    ++total;
    if (predicate(s)) ++hits;
  });
  return make_rational(BigCount(std::to_string(hits)), BigCount(std::to_string(total)));
}

Rational theorem_prediction(ArcRule rule, const OccupancyVector& p, int r) {
  if (r < 1) throw std::invalid_argument("predictions need r >= 1");
  require_nonempty_M(p, r);
  const int k = p.k();
  const BigCount denominator = cardinality_M(p, r);
  switch (rule) {
    case ArcRule::alpha:
      return 1 - make_rational(p.count(k), r);
    case ArcRule::beta: {
      std::vector<int> q(p.values().begin(), p.values().end());
      for (int j = 2; j <= k; ++j) --q[static_cast<std::size_t>(j - 1)];
      return make_rational(cardinality_M(q, r - 1), denominator);
    }
    case ArcRule::gamma: {
      BigCount numerator = 0;
      for (int j = 1; j <= k; ++j) {
        std::vector<int> q(p.values().begin(), p.values().end());
        for (int i = 1; i <= k; ++i) {
          if (i != j) --q[static_cast<std::size_t>(i - 1)];
        }
        numerator += cardinality_M(q, r - 1);
      }
      return make_rational(numerator, denominator);
    }
    case ArcRule::delta:
      break;
  }
  throw std::invalid_argument("no proven closed form for rule delta; use conjecture1_prediction");
}

Rational conjecture1_prediction(const OccupancyVector& p, int r) {
  if (r < 1) throw std::invalid_argument("predictions need r >= 1");
  require_nonempty_M(p, r);
  return make_rational(cardinality_M(p, r - 1), cardinality_M(p, r));
}

Rational predicted_tree_probability(ArcRule rule, const OccupancyVector& p, int r) {
  return rule == ArcRule::delta ? conjecture1_prediction(p, r) : theorem_prediction(rule, p, r);
}

ProbabilityModeReport probability_report(ArcRule rule, const OccupancyVector& p, int r,
                                         AssignmentMode mode) {
  Rational exact = exact_tree_probability(rule, p, r, mode);
  Rational predicted = predicted_tree_probability(rule, p, r);
  const bool match = exact == predicted;
  return {rule, p, r, mode, std::move(exact), std::move(predicted), match};
}

std::vector<OccupancyVector> occupancy_grid(int k, int r) {
  if (r < 0) throw std::invalid_argument("grid needs r >= 0");
  std::vector<OccupancyVector> out;
  std::vector<int> p(static_cast<std::size_t>(k), 0);
  while (true) {
    out.emplace_back(p);
    int j = k - 1;
    while (j >= 0 && p[static_cast<std::size_t>(j)] == r) {
      p[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
    ++p[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace treeprob
