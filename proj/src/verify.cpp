#include "treeprob/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "treeprob/events.hpp"
#include "treeprob/montecarlo.hpp"

namespace treeprob {

namespace {

struct WorkItem {
  int k;
  int r;
  OccupancyVector p;
};

std::vector<WorkItem> grid_items(const GridOptions& options) {
  if (options.k_min < 2 || options.k_max < options.k_min || options.k_max > kMaxGroundSize) {
    throw std::invalid_argument("grid needs 2 <= k_min <= k_max <= " +
                                std::to_string(kMaxGroundSize));
  }
  std::vector<WorkItem> items;
  for (int k = options.k_min; k <= options.k_max; ++k) {
    int r_lo = 1;
    int r_hi = options.r_max > 0 ? options.r_max : k - 1;
    if (options.mode == AssignmentMode::surjection) r_hi = std::min(r_hi, k - 1);
    if (options.mode == AssignmentMode::identity) r_lo = r_hi = k - 1;
    for (int r = r_lo; r <= r_hi; ++r) {
      for (auto& p : occupancy_grid(k, r)) items.push_back({k, r, std::move(p)});
    }
  }
  return items;
}

std::vector<GridCell> run_items(const std::vector<WorkItem>& items, unsigned jobs,
                                const std::function<std::vector<GridCell>(const WorkItem&)>& fn) {
  std::vector<std::vector<GridCell>> results(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        results[i] = fn(items[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(items.size(), 1))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<GridCell> cells;
  for (auto& r : results) {
    std::move(r.begin(), r.end(), std::back_inserter(cells));
  }
  return cells;
}

std::vector<int> to_vector(const OccupancyVector& p) {
  return std::vector<int>(p.values().begin(), p.values().end());
}

std::vector<std::pair<std::string, std::string>> describe(const GridOptions& options) {
  return {{"k_min", std::to_string(options.k_min)},
          {"k_max", std::to_string(options.k_max)},
          {"r_max", options.r_max > 0 ? std::to_string(options.r_max) : std::string("k-1")},
          {"mode", std::string(mode_name(options.mode))},
          {"p", "all p in [0,r]^k"}};
}

std::string d_label(const SubsetMask& d) { return "D=" + to_string(d); }

std::vector<int> q_beta(const OccupancyVector& p) {
  std::vector<int> q = to_vector(p);
  for (std::size_t j = 1; j < q.size(); ++j) --q[j];
  return q;
}

std::vector<int> q_gamma(const OccupancyVector& p, int keep) {
  std::vector<int> q = to_vector(p);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (static_cast<int>(j) + 1 != keep) --q[j];
  }
  return q;
}

Rational sign_power(int exponent) { return exponent % 2 == 0 ? Rational(1) : Rational(-1); }

}  // namespace

std::string_view status_name(CellStatus status) noexcept {
  switch (status) {
    case CellStatus::pass: return "pass";
    case CellStatus::fail: return "fail";
    case CellStatus::skipped_infeasible: return "skipped-infeasible";
  }
  return "?";
}

GridSummary GridReport::summary() const {
  GridSummary s;
  for (const auto& c : cells) {
    switch (c.status) {
      case CellStatus::pass: ++s.pass; break;
      case CellStatus::fail: ++s.fail; break;
      case CellStatus::skipped_infeasible: ++s.skipped; break;
    }
  }
  return s;
}

GridCell make_cell(std::string zeta, std::string check, int k, int r, std::vector<int> p,
                   Rational lhs, Rational rhs) {
  const CellStatus status = lhs == rhs ? CellStatus::pass : CellStatus::fail;
  return {std::move(zeta), std::move(check), k, r, std::move(p), std::move(lhs), std::move(rhs),
          status};
}

GridCell skipped_cell(std::string zeta, std::string check, int k, int r, std::vector<int> p) {
  return {std::move(zeta), std::move(check), k, r, std::move(p), Rational(0), Rational(0),
          CellStatus::skipped_infeasible};
}

GridReport verify_theorem(const GridOptions& options) {
  GridReport report{"theorem", "verification", describe(options), {}};
  const auto items = grid_items(options);
  report.cells = run_items(items, options.jobs, [&](const WorkItem& item) {
    std::vector<GridCell> cells;
    const auto p = to_vector(item.p);
    const int k = item.k;
    const bool feasible = cardinality_M(item.p, item.r) != 0;
    for (ArcRule rule : kTheoremRules) {
      const std::string zeta(rule_name(rule));
      if (!feasible) {
        cells.push_back(skipped_cell(zeta, "tree-probability", k, item.r, p));
        continue;
      }
      const Rational exact = exact_tree_probability(rule, item.p, item.r, options.mode);
      cells.push_back(make_cell(zeta, "tree-probability", k, item.r, p, exact,
                                theorem_prediction(rule, item.p, item.r)));
      if (item.r < 2) continue;
      std::function<bool(const SubsetTuple&)> event;
      std::string label;
      switch (rule) {
        case ArcRule::alpha:
          label = "equals Pr(k notin S_1)";
          event = [k](const SubsetTuple& s) { return !s.subset(1).contains(k); };
          break;
        case ArcRule::beta:
          label = "equals Pr(S_1={2..k})";
          event = [k](const SubsetTuple& s) {
            return s.subset(1).bits() == (SubsetMask::full_bits(k) & ~1u);
          };
          break;
        default:
          label = "equals Pr(|S_1|=k-1)";
          event = [k](const SubsetTuple& s) { return s.subset(1).size() == k - 1; };
          break;
      }
      cells.push_back(make_cell(zeta, label, k, item.r, p, exact,
                                conditional_tuple_probability(item.p, item.r, event)));
    }
    return cells;
  });
  return report;
}

GridReport verify_conjecture1(const GridOptions& options) {
  GridReport report{"conjecture1", "evidence", describe(options), {}};
  const auto items = grid_items(options);
  report.cells = run_items(items, options.jobs, [&](const WorkItem& item) {
    std::vector<GridCell> cells;
    const auto p = to_vector(item.p);
    if (cardinality_M(item.p, item.r) == 0) {
      cells.push_back(skipped_cell("delta", "count-ratio", item.k, item.r, p));
      return cells;
    }
    const Rational exact = exact_tree_probability(ArcRule::delta, item.p, item.r, options.mode);
    cells.push_back(make_cell("delta", "count-ratio |M_{p,r-1}|/|M_{p,r}|", item.k, item.r, p,
                              exact, conjecture1_prediction(item.p, item.r)));
    cells.push_back(make_cell(
        "delta", "equals Pr(S_1 empty)", item.k, item.r, p, exact,
        conditional_tuple_probability(item.p, item.r,
                                      [](const SubsetTuple& s) { return s.subset(1).is_empty(); })));
    return cells;
  });
  return report;
}

GridReport verify_conjecture2(const GridOptions& options) {
  if (options.mode != AssignmentMode::surjection) {
    throw std::invalid_argument("determinant suites are defined over surjections only");
  }
  GridReport report{"conjecture2", "evidence", describe(options), {}};
  const auto items = grid_items(options);
  report.cells = run_items(items, options.jobs, [&](const WorkItem& item) {
    std::vector<GridCell> cells;
    const auto p = to_vector(item.p);
    const int k = item.k;
    const BigCount count_M = cardinality_M(item.p, item.r);
    if (count_M == 0) {
      cells.push_back(skipped_cell("delta", "Pdet(M^D)", k, item.r, p));
      return cells;
    }
    const BigCount count_S = cardinality_S(item.p, item.r);
    const Rational scale = make_rational(count_M, count_S);
    const PaperSpace space(item.p, item.r);

    Rational alternating = 0;
    const std::uint32_t subsets = 1u << (k - 1);
    for (std::uint32_t bits = 0; bits < subsets; ++bits) {
      const SubsetMask d(k - 1, bits);
      const Rational lhs = pdet(matrix_M_D(d, space));
      const Rational conditional = conditional_tuple_probability(
          item.p, item.r, [&](const SubsetTuple& s) {
            const auto& first = s.subset(1);
            return !first.contains(k) && (first.bits() & bits) == bits;
          });
      alternating += sign_power(d.size()) * lhs;
      cells.push_back(make_cell("delta", "Pdet(M^D) " + d_label(d), k, item.r, p, lhs,
                                scale * conditional));
    }
    const Rational delta_det = pdet(matrix_M(ArcRule::delta, space));
    cells.push_back(make_cell("delta", "sum_D (-1)^|D| Pdet(M^D) = Pdet(M_delta)", k, item.r, p,
                              alternating, delta_det));
    cells.push_back(make_cell("delta", "(|S|/|M|) Pdet(M_delta) = |M_{p,r-1}|/|M_{p,r}|", k,
                              item.r, p, delta_det / scale,
                              conjecture1_prediction(item.p, item.r)));
    return cells;
  });
  return report;
}

GridReport verify_pdet_lemmas(const GridOptions& options) {
  if (options.mode != AssignmentMode::surjection) {
    throw std::invalid_argument("determinant suites are defined over surjections only");
  }
  GridReport report{"lemmas", "verification", describe(options), {}};
  const auto items = grid_items(options);
  report.cells = run_items(items, options.jobs, [&](const WorkItem& item) {
    std::vector<GridCell> cells;
    const auto p = to_vector(item.p);
    const int k = item.k;
    const int r = item.r;
    const BigCount count_M = cardinality_M(item.p, r);
    if (count_M == 0) {
      cells.push_back(skipped_cell("-", "determinantal identities", k, r, p));
      return cells;
    }
    const BigCount count_S = cardinality_S(item.p, r);
    const Rational scale = make_rational(count_M, count_S);
    const PaperSpace space(item.p, r);
    auto add = [&](ArcRule rule, std::string check, Rational lhs, Rational rhs) {
      cells.push_back(make_cell(std::string(rule_name(rule)), std::move(check), k, r, p,
                                std::move(lhs), std::move(rhs)));
    };

    for (ArcRule rule : kTheoremRules) {
      const Rational l_prime = pdet(matrix_L_prime(rule, space));
      const Rational m = pdet(matrix_M(rule, space));
      add(rule, "P = (|S|/|M|) Pdet(L')", exact_tree_probability(rule, item.p, r),
          l_prime / scale);
      add(rule, "Pdet(L') = Pdet(M)", l_prime, m);
    }
    add(ArcRule::delta, "P = (|S|/|M|) Pdet(M)", exact_tree_probability(ArcRule::delta, item.p, r),
        pdet(matrix_M(ArcRule::delta, space)) / scale);

    // alpha: M_alpha = M^(2) peeled into N^(2..k-1) and the last stage M^(k).
    const Rational alpha_m = pdet(matrix_M(ArcRule::alpha, space));
    const Rational alpha_closed = scale * (1 - make_rational(item.p.count(k), r));
    const Rational alpha_last = pdet(matrix_M_a(ArcRule::alpha, k, space));
    add(ArcRule::alpha, "Pdet(M^(k)) = (|M|/|S|)(1 - p_k/r)", alpha_last, alpha_closed);
    Rational alpha_sum = alpha_last;
    for (int a = 2; a <= k - 1; ++a) {
      const Rational n_a = pdet(matrix_N_a(ArcRule::alpha, a, space));
      alpha_sum += n_a;
      add(ArcRule::alpha, "Pdet(N^(" + std::to_string(a) + ")) = 0", n_a, 0);
    }
    add(ArcRule::alpha, "Pdet(M) = Pdet(M^(k)) + sum_a Pdet(N^(a))", alpha_m, alpha_sum);
    add(ArcRule::alpha, "Pdet(M) = (|M|/|S|)(1 - p_k/r)", alpha_m, alpha_closed);

    // beta: M'_beta = M^(k-1) peeled down to M^(1).
    const Rational beta_m = pdet(matrix_M(ArcRule::beta, space));
    const Rational beta_prime = pdet(matrix_M_beta_prime(space));
    const Rational beta_closed =
        make_rational(cardinality_M(q_beta(item.p), r - 1), count_S);
    add(ArcRule::beta, "Pdet(M) = (-1)^(k-1) Pdet(M')", beta_m, sign_power(k - 1) * beta_prime);
    const Rational beta_first = pdet(matrix_M_a(ArcRule::beta, 1, space));
    add(ArcRule::beta, "Pdet(M^(1)) = (-1)^(k-1) |M_{q,r-1}|/|S|", beta_first,
        sign_power(k - 1) * beta_closed);
    Rational beta_sum = beta_first;
    for (int a = 2; a <= k - 1; ++a) {
      const Rational n_a = pdet(matrix_N_a(ArcRule::beta, a, space));
      beta_sum += n_a;
      add(ArcRule::beta, "Pdet(N^(" + std::to_string(a) + ")) = 0", n_a, 0);
    }
    add(ArcRule::beta, "Pdet(M') = Pdet(M^(1)) + sum_a Pdet(N^(a))", beta_prime, beta_sum);
    add(ArcRule::beta, "Pdet(M) = |M_{q,r-1}|/|S|", beta_m, beta_closed);

    // gamma: M_gamma splits into the k matrices Q^(a).
    const Rational gamma_m = pdet(matrix_M(ArcRule::gamma, space));
    Rational q_sum = 0;
    BigCount closed_numerator = 0;
    for (int a = 1; a <= k; ++a) {
      q_sum += pdet(matrix_Q_a(a, space));
      closed_numerator += cardinality_M(q_gamma(item.p, a), r - 1);
    }
    add(ArcRule::gamma, "Pdet(M) = sum_a Pdet(Q^(a))", gamma_m, q_sum);
    add(ArcRule::gamma, "Pdet(M) = sum_a |M_{q(a),r-1}|/|S|", gamma_m,
        make_rational(closed_numerator, count_S));
    return cells;
  });
  return report;
}

GridReport verify_prop1(std::size_t trials, std::uint64_t seed) {
  GridReport report{"prop1",
                    "verification",
                    {{"trials", std::to_string(trials)},
                     {"seed", std::to_string(seed)},
                     {"n", "2..4"},
                     {"omega", "1..16"}},
                    {}};
  RandomStream rng(seed);
  for (std::size_t c = 0; c < trials; ++c) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 3));
    const std::size_t points = 1 + uniform_below(rng, 16);
    const SpacePtr space = make_space(points);
    EventMatrix e(n - 1, n, space);
    for (int i = 1; i < n; ++i) {
      for (int j = 1; j <= n; ++j) {
        std::vector<bool> member(points);
        for (std::size_t x = 0; x < points; ++x) member[x] = uniform_below(rng, 2) == 1;
        e.set(i, j, GeneralizedEvent::indicator(space, member));
      }
    }
    report.cells.push_back(make_cell("-",
                                     "random events #" + std::to_string(c) + " |Omega|=" +
                                         std::to_string(points) + ": sum_T Pr(T) = Pdet(L)",
                                     n, 0, {}, sum_tree_probabilities(e),
                                     pdet(reduced_laplacian(e))));
  }

  // Independent arc events on a product space: one coordinate per arc (i, j),
  // E_ij = {coordinate < numerator}, so Pr(E_ij) = numerator / denominator.
  RandomStream weights = rng.split(1);
  for (int n = 2; n <= 4; ++n) {
    for (int sample = 0; sample < 3; ++sample) {
      std::vector<std::pair<int, int>> arcs;
      for (int i = 1; i < n; ++i) {
        for (int j = 1; j <= n; ++j) {
          if (i != j) arcs.emplace_back(i, j);
        }
      }
      std::vector<int> denominators;
      std::vector<int> numerators;
      std::size_t points = 1;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        const int den = n == 4 ? 2 : 2 + static_cast<int>(uniform_below(weights, 2));
        denominators.push_back(den);
        numerators.push_back(static_cast<int>(uniform_below(weights, static_cast<std::uint64_t>(den) + 1)));
        points *= static_cast<std::size_t>(den);
      }
      const SpacePtr space = make_space(points);
      EventMatrix e(n - 1, n, space);
      std::vector<std::vector<Rational>> laplacian(static_cast<std::size_t>(n - 1),
                                                   std::vector<Rational>(static_cast<std::size_t>(n - 1), 0));
      std::size_t stride = 1;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        const auto [i, j] = arcs[a];
        std::vector<bool> member(points);
        for (std::size_t x = 0; x < points; ++x) {
          const auto coordinate = static_cast<int>((x / stride) % static_cast<std::size_t>(denominators[a]));
          member[x] = coordinate < numerators[a];
        }
        stride *= static_cast<std::size_t>(denominators[a]);
        e.set(i, j, GeneralizedEvent::indicator(space, member));
        const Rational w = make_rational(numerators[a], denominators[a]);
        laplacian[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(i - 1)] += w;
        if (j < n) laplacian[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] -= w;
      }
      const Rational numeric = determinant(laplacian);
      const std::string tag = "independent n=" + std::to_string(n) + " #" + std::to_string(sample);
      report.cells.push_back(make_cell("-", tag + ": Pdet(L) = det(Pr(L))", n, 0, {},
                                       pdet(reduced_laplacian(e)), numeric));
      report.cells.push_back(make_cell("-", tag + ": sum_T Pr(T) = det(Pr(L))", n, 0, {},
                                       sum_tree_probabilities(e), numeric));
    }
  }
  return report;
}

}  // namespace treeprob
