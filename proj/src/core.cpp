#include "treeprob/core.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rule_kernels.hpp"

namespace treeprob {

namespace {

void check_ground_size(int k) {
  if (k < 1 || k > kMaxGroundSize) {
    throw std::invalid_argument("ground-set size k must lie in [1, " +
                                std::to_string(kMaxGroundSize) + "], got " + std::to_string(k));
  }
}

void check_vertex(int i, int k, const char* what) {
  if (i < 1 || i > k) {
    throw std::invalid_argument(std::string(what) + " " + std::to_string(i) +
                                " is outside [1, " + std::to_string(k) + "]");
  }
}

template <class Range>
std::string join(const Range& values) {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : values) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  return os.str();
}

}  // namespace

SubsetMask::SubsetMask(int k, std::uint32_t bits) : bits_(bits), k_(k) {
  check_ground_size(k);
  if ((bits & ~full_bits(k)) != 0) {
    throw std::invalid_argument("subset mask has bits above position k=" + std::to_string(k));
  }
}

SubsetMask SubsetMask::full(int k) {
  check_ground_size(k);
  return SubsetMask(k, full_bits(k), Unchecked{});
}

SubsetMask SubsetMask::of(int k, std::initializer_list<int> elements) {
  return of(k, std::span<const int>(elements.begin(), elements.size()));
}

SubsetMask SubsetMask::of(int k, std::span<const int> elements) {
  check_ground_size(k);
  std::uint32_t bits = 0;
  for (int j : elements) {
    check_vertex(j, k, "element");
    bits |= 1u << (j - 1);
  }
  return SubsetMask(k, bits, Unchecked{});
}

std::vector<int> SubsetMask::elements() const {
  std::vector<int> out;
  for (int j = 1; j <= k_; ++j) {
    if (contains(j)) out.push_back(j);
  }
  return out;
}

std::string to_string(const SubsetMask& s) { return "{" + join(s.elements()) + "}"; }

OccupancyVector::OccupancyVector(std::vector<int> counts) : counts_(std::move(counts)) {
  check_ground_size(static_cast<int>(counts_.size()));
  for (int c : counts_) {
    if (c < 0) throw std::invalid_argument("occupancy entries must be non-negative");
  }
}

std::string to_string(const OccupancyVector& p) { return "(" + join(p.values()) + ")"; }

SubsetTuple::SubsetTuple(int k, std::vector<SubsetMask> subsets)
    : k_(k), subsets_(std::move(subsets)) {
  check_ground_size(k);
  for (const auto& s : subsets_) {
    if (s.k() != k) throw std::invalid_argument("tuple mixes subsets of different ground sets");
  }
}

bool SubsetTuple::is_proper() const noexcept {
  return std::none_of(subsets_.begin(), subsets_.end(),
                      [](const SubsetMask& s) { return s.is_full(); });
}

std::string to_string(const SubsetTuple& tuple) {
  std::string out = "(";
  for (int t = 1; t <= tuple.r(); ++t) {
    if (t > 1) out += ',';
    out += to_string(tuple.subset(t));
  }
  return out + ")";
}

OccupancyVector occupancy(const SubsetTuple& tuple) {
  std::vector<int> counts(static_cast<std::size_t>(tuple.k()), 0);
  for (const auto& s : tuple.subsets()) {
    for (int j = 1; j <= tuple.k(); ++j) {
      if (s.contains(j)) ++counts[static_cast<std::size_t>(j - 1)];
    }
  }
  return OccupancyVector(std::move(counts));
}

std::string_view mode_name(AssignmentMode mode) noexcept {
  switch (mode) {
    case AssignmentMode::surjection: return "surjection";
    case AssignmentMode::function: return "function";
    case AssignmentMode::identity: return "identity";
  }
  return "?";
}

std::optional<AssignmentMode> parse_mode(std::string_view name) noexcept {
  if (name == "surjection") return AssignmentMode::surjection;
  if (name == "function") return AssignmentMode::function;
  if (name == "identity") return AssignmentMode::identity;
  return std::nullopt;
}

AssignmentMap::AssignmentMap(std::vector<int> values, int r, AssignmentMode mode)
    : values_(std::move(values)), r_(r), mode_(mode) {
  if (r < 1) throw std::invalid_argument("assignment target size r must be at least 1");
  for (int v : values_) check_vertex(v, r, "assignment target");
  const int n = domain_size();
  switch (mode) {
    case AssignmentMode::function:
      break;
    case AssignmentMode::surjection: {
      std::vector<bool> hit(static_cast<std::size_t>(r), false);
      for (int v : values_) hit[static_cast<std::size_t>(v - 1)] = true;
      if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
        throw std::invalid_argument("assignment is not a surjection onto [r]");
      }
      break;
    }
    case AssignmentMode::identity:
      if (r != n) throw std::invalid_argument("identity assignment needs r = k-1");
      for (int i = 1; i <= n; ++i) {
        if (values_[static_cast<std::size_t>(i - 1)] != i) {
          throw std::invalid_argument("identity assignment must map i to i");
        }
      }
      break;
  }
}

AssignmentMap AssignmentMap::identity(int k) {
  if (k < 2) throw std::invalid_argument("identity assignment needs k >= 2");
  std::vector<int> values(static_cast<std::size_t>(k - 1));
  for (int i = 1; i < k; ++i) values[static_cast<std::size_t>(i - 1)] = i;
  return AssignmentMap(std::move(values), k - 1, AssignmentMode::identity);
}

std::string_view rule_name(ArcRule rule) noexcept {
  switch (rule) {
    case ArcRule::alpha: return "alpha";
    case ArcRule::beta: return "beta";
    case ArcRule::gamma: return "gamma";
    case ArcRule::delta: return "delta";
  }
  return "?";
}

std::optional<ArcRule> parse_rule(std::string_view name) noexcept {
  for (ArcRule rule : kAllRules) {
    if (rule_name(rule) == name) return rule;
  }
  return std::nullopt;
}

Digraph::Digraph(int k, std::vector<int> endpoints) : k_(k), endpoints_(std::move(endpoints)) {
  check_ground_size(k);
  if (static_cast<int>(endpoints_.size()) != k - 1) {
    throw std::invalid_argument("digraph on [k] needs exactly k-1 arcs");
  }
  for (int e : endpoints_) check_vertex(e, k, "arc endpoint");
}

std::vector<Arc> Digraph::arcs() const {
  std::vector<Arc> out;
  out.reserve(endpoints_.size());
  for (int i = 1; i < k_; ++i) out.push_back({i, endpoint(i)});
  return out;
}

bool Digraph::has_loop() const noexcept {
  for (int i = 1; i < k_; ++i) {
    if (endpoints_[static_cast<std::size_t>(i - 1)] == i) return true;
  }
  return false;
}

SubsetMask cyclic_interval(int i, int j, int k) {
  check_ground_size(k);
  check_vertex(i, k, "vertex");
  check_vertex(j, k, "vertex");
  return SubsetMask(k, detail::interval_bits(i, j, k));
}

int map_alpha(int i, const SubsetMask& s) {
  check_vertex(i, s.k(), "vertex");
  return detail::alpha(i, s.bits(), s.k());
}

int map_beta(int i, const SubsetMask& s) {
  check_vertex(i, s.k(), "vertex");
  return detail::beta(i, s.bits(), s.k());
}

int map_gamma(int i, const SubsetMask& s) {
  check_vertex(i, s.k(), "vertex");
  return detail::gamma(i, s.bits(), s.k());
}

int map_delta(int i, const SubsetMask& s) {
  check_vertex(i, s.k(), "vertex");
  return detail::delta(i, s.bits(), s.k());
}

int apply_rule(ArcRule rule, int i, const SubsetMask& s) {
  check_vertex(i, s.k(), "vertex");
  return detail::rule_endpoint(rule, i, s.bits(), s.k());
}

Digraph build_digraph(const SubsetTuple& tuple, const AssignmentMap& f, ArcRule rule) {
  const int k = tuple.k();
  if (f.domain_size() != k - 1) {
    throw std::invalid_argument("assignment has " + std::to_string(f.domain_size()) +
                                " entries but k-1 = " + std::to_string(k - 1));
  }
  if (f.r() != tuple.r()) {
    throw std::invalid_argument("assignment targets [" + std::to_string(f.r()) +
                                "] but the tuple has r = " + std::to_string(tuple.r()));
  }
  std::vector<int> endpoints(static_cast<std::size_t>(k - 1));
  for (int i = 1; i < k; ++i) {
    endpoints[static_cast<std::size_t>(i - 1)] =
        detail::rule_endpoint(rule, i, tuple.subset(f(i)).bits(), k);
  }
  return Digraph(k, std::move(endpoints));
}

bool is_rooted_tree(const Digraph& g) {
  return detail::endpoints_form_tree(g.endpoints(), g.k());
}

bool is_pseudoforest(const Digraph& g) {
  return detail::endpoints_form_pseudoforest(g.endpoints(), g.k());
}

}  // namespace treeprob
