#include "treeprob/events.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "rule_kernels.hpp"

namespace treeprob {

namespace {

constexpr int kMaxPdetOrder = 8;

void require_same_space(const GeneralizedEvent& a, const GeneralizedEvent& b) {
  if (a.space() != b.space()) {
    throw std::invalid_argument("generalized events live on different sample spaces");
  }
}

template <class Op>
GeneralizedEvent pointwise(const GeneralizedEvent& a, const GeneralizedEvent& b, Op op) {
  require_same_space(a, b);
  std::vector<Rational> w(a.weights().size());
  for (std::size_t x = 0; x < w.size(); ++x) w[x] = op(a.weights()[x], b.weights()[x]);
  return GeneralizedEvent(a.space(), std::move(w));
}

// Signed permutation expansion over rows 0..n-1 with a running pointwise
// product; branches whose product vanishes are pruned.
template <class Weight>
Weight expand_permutations(const std::vector<std::vector<Weight>>& entries, int n,
                           std::size_t points) {
  std::vector<std::vector<Weight>> running(static_cast<std::size_t>(n) + 1,
                                           std::vector<Weight>(points));
  std::fill(running[0].begin(), running[0].end(), Weight(1));
  std::vector<bool> zero_entry(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    zero_entry[e] = std::all_of(entries[e].begin(), entries[e].end(),
                                [](const Weight& w) { return w == 0; });
  }

  Weight total(0);
  std::function<void(int, std::uint32_t, bool)> descend = [&](int row, std::uint32_t used,
                                                              bool negative) {
    const auto& current = running[static_cast<std::size_t>(row)];
    if (row == n) {
      Weight sum(0);
      for (const auto& w : current) sum += w;
      if (negative) {
        total -= sum;
      } else {
        total += sum;
      }
      return;
    }
    for (int col = 0; col < n; ++col) {
      if ((used >> col) & 1u) continue;
      const std::size_t e = static_cast<std::size_t>(row) * static_cast<std::size_t>(n) +
                            static_cast<std::size_t>(col);
      if (zero_entry[e]) continue;
      auto& next = running[static_cast<std::size_t>(row) + 1];
      bool any = false;
      for (std::size_t x = 0; x < points; ++x) {
        next[x] = current[x] * entries[e][x];
        if (next[x] != 0) any = true;
      }
      if (!any) continue;
      // Each already-used column to the right of col adds one inversion.
      const int inversions = std::popcount(used >> (col + 1));
      descend(row + 1, used | (1u << col), negative != (inversions % 2 == 1));
    }
  };
  descend(0, 0, false);
  return total;
}

std::vector<int> parse_pruefer(const std::vector<int>& sequence, int n) {
  std::vector<int> degree(static_cast<std::size_t>(n) + 1, 1);
  for (int a : sequence) ++degree[static_cast<std::size_t>(a)];
  std::vector<std::vector<int>> adjacent(static_cast<std::size_t>(n) + 1);
  auto link = [&](int u, int v) {
    adjacent[static_cast<std::size_t>(u)].push_back(v);
    adjacent[static_cast<std::size_t>(v)].push_back(u);
  };
  for (int a : sequence) {
    int leaf = 1;
    while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
    link(leaf, a);
    --degree[static_cast<std::size_t>(leaf)];
    --degree[static_cast<std::size_t>(a)];
  }
  int u = 0;
  for (int v = 1; v <= n; ++v) {
    if (degree[static_cast<std::size_t>(v)] == 1) {
      if (u == 0) {
        u = v;
      } else {
        link(u, v);
      }
    }
  }
  // Orient every edge toward n.
  std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> frontier = {n};
  parent[static_cast<std::size_t>(n)] = n;
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    for (int w : adjacent[static_cast<std::size_t>(v)]) {
      if (parent[static_cast<std::size_t>(w)] == 0) {
        parent[static_cast<std::size_t>(w)] = v;
        frontier.push_back(w);
      }
    }
  }
  return std::vector<int>(parent.begin() + 1, parent.end() - 1);
}

void require_theorem_family(ArcRule rule, const char* what) {
  if (rule != ArcRule::alpha && rule != ArcRule::beta) {
    throw std::invalid_argument(std::string(what) + " is defined for rules alpha and beta only");
  }
}

void require_stage(int a, int lo, int hi, const char* what) {
  if (a < lo || a > hi) {
    throw std::invalid_argument(std::string(what) + ": stage a=" + std::to_string(a) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "]");
  }
}

template <class Entry>
EventMatrix square_matrix(const PaperSpace& space, Entry entry) {
  const int k = space.k();
  EventMatrix m(k, k, space.space());
  for (int i = 1; i < k; ++i) {
    for (int j = 1; j <= k; ++j) m.set(i, j, entry(i, j));
  }
  const auto omega = GeneralizedEvent::full(space.space());
  for (int j = 1; j <= k; ++j) m.set(k, j, omega);
  return m;
}

SubsetRef f_of(int i) { return SubsetRef::assigned_to(i); }

}  // namespace

SampleSpace::SampleSpace(std::size_t size) : size_(size) {
  if (size == 0) throw std::invalid_argument("sample space must be nonempty");
}

SpacePtr make_space(std::size_t size) { return std::make_shared<const SampleSpace>(size); }

GeneralizedEvent::GeneralizedEvent(SpacePtr space, std::vector<Rational> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw std::invalid_argument("generalized event needs a sample space");
  if (weights_.size() != space_->size()) {
    throw std::invalid_argument("weight vector length does not match the sample space");
  }
}

GeneralizedEvent GeneralizedEvent::zero(SpacePtr space) {
  const std::size_t n = space->size();
  return GeneralizedEvent(std::move(space), std::vector<Rational>(n, Rational(0)));
}

GeneralizedEvent GeneralizedEvent::full(SpacePtr space) {
  const std::size_t n = space->size();
  return GeneralizedEvent(std::move(space), std::vector<Rational>(n, Rational(1)));
}

GeneralizedEvent GeneralizedEvent::indicator(SpacePtr space, const std::vector<bool>& member) {
  std::vector<Rational> w(member.size());
  for (std::size_t x = 0; x < member.size(); ++x) w[x] = member[x] ? 1 : 0;
  return GeneralizedEvent(std::move(space), std::move(w));
}

bool GeneralizedEvent::is_plain() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [](const Rational& w) { return w == 0 || w == 1; });
}

bool GeneralizedEvent::is_zero() const {
  return std::all_of(weights_.begin(), weights_.end(), [](const Rational& w) { return w == 0; });
}

bool operator==(const GeneralizedEvent& a, const GeneralizedEvent& b) {
  return a.space_ == b.space_ && a.weights_ == b.weights_;
}

GeneralizedEvent ge_add(const GeneralizedEvent& a, const GeneralizedEvent& b) {
  return pointwise(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}

GeneralizedEvent ge_subtract(const GeneralizedEvent& a, const GeneralizedEvent& b) {
  return pointwise(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}

GeneralizedEvent ge_intersect(const GeneralizedEvent& a, const GeneralizedEvent& b) {
  return pointwise(a, b, [](const Rational& x, const Rational& y) { return Rational(x * y); });
}

GeneralizedEvent ge_scale(const GeneralizedEvent& a, const Rational& factor) {
  std::vector<Rational> w(a.weights().begin(), a.weights().end());
  for (auto& v : w) v *= factor;
  return GeneralizedEvent(a.space(), std::move(w));
}

Rational ge_probability(const GeneralizedEvent& a) {
  Rational sum = 0;
  for (const auto& w : a.weights()) sum += w;
  return sum / Rational(static_cast<unsigned long>(a.space()->size()));
}

GeneralizedEvent operator+(const GeneralizedEvent& a, const GeneralizedEvent& b) {
  return ge_add(a, b);
}

GeneralizedEvent operator-(const GeneralizedEvent& a, const GeneralizedEvent& b) {
  return ge_subtract(a, b);
}

GeneralizedEvent operator-(const GeneralizedEvent& a) { return ge_scale(a, -1); }

EventMatrix::EventMatrix(int rows, int cols, SpacePtr space)
    : rows_(rows), cols_(cols), space_(std::move(space)) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("event matrix needs positive dimensions");
  if (!space_) throw std::invalid_argument("event matrix needs a sample space");
  entries_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                  GeneralizedEvent::zero(space_));
}

std::size_t EventMatrix::index(int i, int j) const {
  if (i < 1 || i > rows_ || j < 1 || j > cols_) {
    throw std::out_of_range("event matrix index (" + std::to_string(i) + "," +
                            std::to_string(j) + ") out of range");
  }
  return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols_) +
         static_cast<std::size_t>(j - 1);
}

const GeneralizedEvent& EventMatrix::at(int i, int j) const { return entries_[index(i, j)]; }

void EventMatrix::set(int i, int j, GeneralizedEvent event) {
  if (event.space() != space_) {
    throw std::invalid_argument("event matrix entry lives on a different sample space");
  }
  entries_[index(i, j)] = std::move(event);
}

bool operator==(const EventMatrix& a, const EventMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

Rational pdet(const EventMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("Pr-determinant needs a square matrix");
  const int n = m.rows();
  if (n > kMaxPdetOrder) {
    throw std::invalid_argument("Pr-determinant order " + std::to_string(n) + " exceeds " +
                                std::to_string(kMaxPdetOrder));
  }
  const std::size_t points = m.space()->size();

  // Integer weights with a safe magnitude bound take a machine-integer path.
  bool integral = true;
  double max_abs = 1.0;
  for (int i = 1; i <= n && integral; ++i) {
    for (int j = 1; j <= n && integral; ++j) {
      for (const auto& w : m.at(i, j).weights()) {
        if (w.get_den() != 1 || abs(w.get_num()) > (1 << 20)) {
          integral = false;
          break;
        }
        max_abs = std::max(max_abs, std::abs(w.get_d()));
      }
    }
  }
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  integral = integral &&
             std::pow(max_abs, n) * factorial * static_cast<double>(points) < 0x1p62;

  const Rational size(static_cast<unsigned long>(points));
  if (integral) {
    std::vector<std::vector<std::int64_t>> entries;
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        std::vector<std::int64_t> w;
        w.reserve(points);
        for (const auto& v : m.at(i, j).weights()) w.push_back(v.get_num().get_si());
        entries.push_back(std::move(w));
      }
    }
    const std::int64_t total = expand_permutations(entries, n, points);
    return Rational(BigCount(std::to_string(total))) / size;
  }
  std::vector<std::vector<Rational>> entries;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const auto w = m.at(i, j).weights();
      entries.emplace_back(w.begin(), w.end());
    }
  }
  return expand_permutations(entries, n, points) / size;
}

EventMatrix reduced_laplacian(const EventMatrix& e) {
  const int n = e.cols();
  if (e.rows() != n - 1) {
    throw std::invalid_argument("reduced Laplacian needs an (n-1) x n matrix");
  }
  EventMatrix l(n - 1, n - 1, e.space());
  for (int i = 1; i < n; ++i) {
    GeneralizedEvent diagonal = GeneralizedEvent::zero(e.space());
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      diagonal = diagonal + e.at(i, j);
      if (j < n) l.set(i, j, -e.at(i, j));
    }
    l.set(i, i, std::move(diagonal));
  }
  return l;
}

std::vector<std::vector<int>> enumerate_cayley_trees(int n) {
  if (n < 2 || n > 7) {
    throw std::invalid_argument("Cayley tree enumeration supports 2 <= n <= 7, got " +
                                std::to_string(n));
  }
  std::vector<std::vector<int>> trees;
  std::vector<int> sequence(static_cast<std::size_t>(n - 2), 1);
  while (true) {
    trees.push_back(parse_pruefer(sequence, n));
    int pos = n - 3;
    while (pos >= 0 && sequence[static_cast<std::size_t>(pos)] == n) {
      sequence[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++sequence[static_cast<std::size_t>(pos)];
  }
  return trees;
}

Rational sum_tree_probabilities(const EventMatrix& e) {
  const int n = e.cols();
  if (e.rows() != n - 1) {
    throw std::invalid_argument("tree probabilities need an (n-1) x n event matrix");
  }
  const std::size_t points = e.space()->size();
  Rational total = 0;
  std::vector<Rational> running(points);
  for (const auto& tree : enumerate_cayley_trees(n)) {
    std::fill(running.begin(), running.end(), Rational(1));
    for (int i = 1; i < n; ++i) {
      const auto w = e.at(i, tree[static_cast<std::size_t>(i - 1)]).weights();
      for (std::size_t x = 0; x < points; ++x) running[x] *= w[x];
    }
    for (const auto& v : running) total += v;
  }
  return total / Rational(static_cast<unsigned long>(points));
}

Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("determinant needs a square matrix");
  }
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      const Rational factor = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= factor * a[c][j];
    }
  }
  return det;
}

PaperSpace::PaperSpace(OccupancyVector p, int r) : p_(std::move(p)), r_(r) {
  const int k = p_.k();
  check_assignment_feasible(k, r, AssignmentMode::surjection);
  for (TupleEnumerator e(p_, r, false); e.next();) {
    tuple_masks_.insert(tuple_masks_.end(), e.masks().begin(), e.masks().end());
  }
  for (AssignmentEnumerator e(k, r, AssignmentMode::surjection); e.next();) {
    assignments_.insert(assignments_.end(), e.values().begin(), e.values().end());
  }
  if (tuple_masks_.empty()) {
    throw std::domain_error("sample space is empty: S_{p,r} has no tuples for p=" +
                            to_string(p_) + ", r=" + std::to_string(r));
  }
  space_ = make_space(tuple_count() * assignment_count());
}

std::uint32_t PaperSpace::subset_bits(std::size_t point, int t) const {
  const std::size_t tuple = point / assignment_count();
  return tuple_masks_[tuple * static_cast<std::size_t>(r_) + static_cast<std::size_t>(t - 1)];
}

int PaperSpace::target(std::size_t point, int i) const {
  const std::size_t map = point % assignment_count();
  return assignments_[map * static_cast<std::size_t>(k() - 1) + static_cast<std::size_t>(i - 1)];
}

SubsetTuple PaperSpace::tuple_at(std::size_t point) const {
  if (point >= size()) throw std::out_of_range("sample point out of range");
  std::vector<SubsetMask> subsets;
  for (int t = 1; t <= r_; ++t) subsets.emplace_back(k(), subset_bits(point, t));
  return SubsetTuple(k(), std::move(subsets));
}

AssignmentMap PaperSpace::assignment_at(std::size_t point) const {
  if (point >= size()) throw std::out_of_range("sample point out of range");
  std::vector<int> values;
  for (int i = 1; i < k(); ++i) values.push_back(target(point, i));
  return AssignmentMap(std::move(values), r_, AssignmentMode::surjection);
}

PaperSpace build_paper_space(const OccupancyVector& p, int r) { return PaperSpace(p, r); }

namespace {

// Subset index t selected by ref at a point.
struct SubsetSelector {
  const PaperSpace& space;
  SubsetRef ref;

  int operator()(std::size_t point) const {
    return ref.kind == SubsetRef::Kind::fixed ? ref.value : space.target(point, ref.value);
  }
};

SubsetSelector checked_selector(const PaperSpace& space, SubsetRef ref) {
  if (ref.kind == SubsetRef::Kind::fixed) {
    if (ref.value < 1 || ref.value > space.r()) {
      throw std::invalid_argument("subset index t=" + std::to_string(ref.value) +
                                  " outside [1, r]");
    }
  } else if (ref.value < 1 || ref.value > space.k() - 1) {
    throw std::invalid_argument("f(i) needs i in [1, k-1], got i=" + std::to_string(ref.value));
  }
  return {space, ref};
}

}  // namespace

GeneralizedEvent event_I(const PaperSpace& space, int i, int j, SubsetRef t) {
  const int k = space.k();
  const std::uint32_t need = detail::interval_bits(wrap(i, k), wrap(j, k), k);
  const SubsetSelector select = checked_selector(space, t);
  return space.indicator([&](std::size_t x) {
    return (space.subset_bits(x, select(x)) & need) == need;
  });
}

GeneralizedEvent event_J(const PaperSpace& space, int i, int j, SubsetRef t) {
  const int k = space.k();
  if (wrap(i, k) != wrap(j, k)) return event_I(space, i, j, t);
  const std::uint32_t full = SubsetMask::full_bits(k);
  const SubsetSelector select = checked_selector(space, t);
  return space.indicator([&](std::size_t x) { return space.subset_bits(x, select(x)) == full; });
}

EventMatrix matrix_L_prime(ArcRule rule, const PaperSpace& space) {
  const int n = space.k() - 1;
  EventMatrix m(n, n, space.space());
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const SubsetRef t = f_of(i);
      switch (rule) {
        case ArcRule::alpha:
          m.set(i, j, event_I(space, i, j, t) - event_I(space, i, j - 1, t));
          break;
        case ArcRule::beta:
          m.set(i, j, event_J(space, i, j + 1, t) - event_J(space, i, j, t));
          break;
        case ArcRule::gamma:
          m.set(i, j, event_J(space, i, j + 1, t) - event_J(space, i, j, t) -
                          event_J(space, i - 1, j + 1, t) + event_J(space, i - 1, j, t));
          break;
        case ArcRule::delta:
          throw std::invalid_argument("L' matrices are defined for alpha, beta and gamma only");
      }
    }
  }
  return m;
}

EventMatrix matrix_M(ArcRule rule, const PaperSpace& space) {
  return square_matrix(space, [&](int i, int j) {
    const SubsetRef t = f_of(i);
    switch (rule) {
      case ArcRule::alpha: return event_I(space, i, j, t);
      case ArcRule::beta: return event_J(space, i, j + 1, t);
      case ArcRule::gamma: return event_J(space, i, j + 1, t) - event_J(space, i - 1, j + 1, t);
      case ArcRule::delta: return event_I(space, i, j, t) - event_J(space, i - 1, j, t);
    }
    throw std::invalid_argument("unknown arc rule");
  });
}

EventMatrix matrix_M_beta_prime(const PaperSpace& space) {
  return square_matrix(space, [&](int i, int j) { return event_J(space, i, j, f_of(i)); });
}

EventMatrix matrix_M_a(ArcRule rule, int a, const PaperSpace& space) {
  require_theorem_family(rule, "M^(a)");
  const int k = space.k();
  const auto zero = GeneralizedEvent::zero(space.space());
  if (rule == ArcRule::alpha) {
    require_stage(a, 1, k, "alpha M^(a)");
    return square_matrix(space, [&](int i, int j) {
      if (i >= a - 1) return event_I(space, i, j, f_of(i));
      if (j != i) return zero;
      return event_I(space, i, i, f_of(i)) - event_J(space, i, i, f_of(i));
    });
  }
  require_stage(a, 1, k - 1, "beta M^(a)");
  return square_matrix(space, [&](int i, int j) {
    if (i <= a) return event_J(space, i, j, f_of(i));
    if (j != i) return zero;
    return event_J(space, i, i, f_of(i)) - event_I(space, i, i, f_of(i));
  });
}

EventMatrix matrix_N_a(ArcRule rule, int a, const PaperSpace& space) {
  require_theorem_family(rule, "N^(a)");
  const int k = space.k();
  require_stage(a, 2, k - 1, rule == ArcRule::alpha ? "alpha N^(a)" : "beta N^(a)");
  EventMatrix m = matrix_M_a(rule, a, space);
  if (rule == ArcRule::alpha) {
    m.set(a - 1, a - 1, event_J(space, a - 1, a - 1, f_of(a - 1)));
  } else {
    m.set(a, a, event_I(space, a, a, f_of(a)));
  }
  return m;
}

EventMatrix matrix_Q_a(int a, const PaperSpace& space) {
  const int k = space.k();
  require_stage(a, 1, k, "Q^(a)");
  EventMatrix m(k, k, space.space());
  const auto omega = GeneralizedEvent::full(space.space());
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (i < a) {
        m.set(i, j, event_J(space, i, j + 1, f_of(i)));
      } else if (i == a) {
        m.set(i, j, omega);
      } else {
        m.set(i, j, event_J(space, i, j + 1, f_of(i - 1)));
      }
    }
  }
  return m;
}

EventMatrix matrix_M_D(const SubsetMask& d, const PaperSpace& space) {
  if (d.k() != space.k() - 1) {
    throw std::invalid_argument("D must be a subset of [k-1]");
  }
  return square_matrix(space, [&](int i, int j) {
    return d.contains(i) ? event_J(space, i - 1, j, f_of(i)) : event_I(space, i, j, f_of(i));
  });
}

}  // namespace treeprob
