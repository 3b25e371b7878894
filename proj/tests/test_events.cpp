#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "oracles.hpp"
#include "treeprob/events.hpp"
#include "treeprob/montecarlo.hpp"

using namespace treeprob;

namespace {

Rational q(long num, long den) { return make_rational(num, den); }

GeneralizedEvent random_event(const SpacePtr& space, RandomStream& rng, bool plain) {
  std::vector<Rational> w(space->size());
  for (auto& x : w) {
    if (plain) {
      x = static_cast<long>(uniform_below(rng, 2));
    } else {
      x = make_rational(static_cast<long>(uniform_below(rng, 7)) - 3,
                        static_cast<long>(uniform_below(rng, 3)) + 1);
    }
  }
  return GeneralizedEvent(space, std::move(w));
}

EventMatrix random_matrix(int rows, int cols, const SpacePtr& space, RandomStream& rng,
                          bool plain) {
  EventMatrix m(rows, cols, space);
  for (int i = 1; i <= rows; ++i) {
    for (int j = 1; j <= cols; ++j) m.set(i, j, random_event(space, rng, plain));
  }
  return m;
}

}  // namespace

TEST(GeneralizedEvent, Algebra) {
  const auto space = make_space(4);
  const auto a = GeneralizedEvent::indicator(space, {true, false, true, false});
  const auto b = GeneralizedEvent::indicator(space, {true, true, false, false});
  EXPECT_EQ(ge_intersect(a, a), a);
  EXPECT_EQ(ge_probability(GeneralizedEvent::full(space)), 1);
  EXPECT_EQ(ge_probability(ge_intersect(a, b)), q(1, 4));
  EXPECT_EQ(ge_probability(a + b), 1);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(-a + a, GeneralizedEvent::zero(space));
  EXPECT_TRUE(a.is_plain());
  EXPECT_FALSE((a + b).is_plain());
  const GeneralizedEvent half(space, std::vector<Rational>(4, q(1, 2)));
  EXPECT_EQ(ge_probability(half), q(1, 2));
  EXPECT_EQ(ge_scale(a, 2), a + a);

  const auto other = make_space(4);
  EXPECT_THROW(a + GeneralizedEvent::full(other), std::invalid_argument);
  EXPECT_THROW(ge_intersect(a, GeneralizedEvent::full(other)), std::invalid_argument);
  EXPECT_FALSE(a == GeneralizedEvent::indicator(other, {true, false, true, false}));
}

TEST(GeneralizedEvent, IntersectionDistributesOverSums) {
  RandomStream rng(7);
  const auto space = make_space(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_event(space, rng, false);
    const auto b = random_event(space, rng, false);
    const auto c = random_event(space, rng, false);
    EXPECT_EQ(ge_intersect(a, b + c), ge_intersect(a, b) + ge_intersect(a, c));
    EXPECT_EQ(ge_intersect(a, b), ge_intersect(b, a));
    EXPECT_EQ(ge_probability(a + b), ge_probability(a) + ge_probability(b));
  }
}

TEST(Pdet, SmallCases) {
  const auto space = make_space(4);
  EventMatrix one(1, 1, space);
  one.set(1, 1, GeneralizedEvent::full(space));
  EXPECT_EQ(pdet(one), 1);

  const auto a = GeneralizedEvent::indicator(space, {true, true, false, true});
  const auto b = GeneralizedEvent::indicator(space, {true, false, true, true});
  EventMatrix diag(2, 2, space);
  diag.set(1, 1, a);
  diag.set(2, 2, b);
  EXPECT_EQ(pdet(diag), ge_probability(ge_intersect(a, b)));

  EXPECT_THROW(pdet(EventMatrix(2, 3, space)), std::invalid_argument);
}

TEST(Pdet, MatchesPointwiseDeterminantAverage) {
  RandomStream rng(11);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto space = make_space(1 + uniform_below(rng, 6));
      const bool plain = trial % 2 == 0;
      const auto m = random_matrix(n, n, space, rng, plain);
      ASSERT_EQ(pdet(m), oracle::pdet(m)) << "n=" << n << " trial=" << trial;
    }
  }
}

TEST(Pdet, LargeIntegerWeightsStayExact) {
  const auto space = make_space(2);
  EventMatrix m(2, 2, space);
  const Rational big = BigCount("4000000000");
  m.set(1, 1, GeneralizedEvent(space, {big, 1}));
  m.set(1, 2, GeneralizedEvent(space, {big, 3}));
  m.set(2, 1, GeneralizedEvent(space, {-big, 2}));
  m.set(2, 2, GeneralizedEvent(space, {big, 5}));
  EXPECT_EQ(pdet(m), oracle::pdet(m));
}

TEST(ReducedLaplacian, Examples) {
  const auto space = make_space(2);
  const auto e12 = GeneralizedEvent::indicator(space, {true, false});
  EventMatrix e(1, 2, space);
  e.set(1, 1, GeneralizedEvent::full(space));
  e.set(1, 2, e12);
  const auto l = reduced_laplacian(e);
  ASSERT_EQ(l.rows(), 1);
  EXPECT_EQ(l.at(1, 1), e12);

  EventMatrix all(2, 3, space);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 3; ++j) all.set(i, j, GeneralizedEvent::full(space));
  }
  const auto l3 = reduced_laplacian(all);
  EXPECT_EQ(ge_probability(l3.at(1, 1)), 2);
  EXPECT_EQ(ge_probability(l3.at(1, 2)), -1);
  EXPECT_EQ(ge_probability(l3.at(2, 1)), -1);
  EXPECT_THROW(reduced_laplacian(EventMatrix(2, 2, space)), std::invalid_argument);
}

TEST(CayleyTrees, CountsAndContentMatchFilter) {
  EXPECT_EQ(enumerate_cayley_trees(2).size(), 1u);
  EXPECT_EQ(enumerate_cayley_trees(3).size(), 3u);
  EXPECT_EQ(enumerate_cayley_trees(5).size(), 125u);
  for (int n = 2; n <= 6; ++n) {
    const auto trees = enumerate_cayley_trees(n);
    const std::set<std::vector<int>> got(trees.begin(), trees.end());
    const auto expected = oracle::cayley_trees(n);
    EXPECT_EQ(got.size(), trees.size());
    EXPECT_EQ(got, std::set<std::vector<int>>(expected.begin(), expected.end()));
  }
  EXPECT_THROW(enumerate_cayley_trees(1), std::invalid_argument);
  EXPECT_THROW(enumerate_cayley_trees(8), std::invalid_argument);
}

TEST(MatrixTree, TwoVertices) {
  const auto space = make_space(3);
  EventMatrix e(1, 2, space);
  const auto e12 = GeneralizedEvent::indicator(space, {true, false, true});
  e.set(1, 2, e12);
  EXPECT_EQ(sum_tree_probabilities(e), q(2, 3));
  EXPECT_EQ(pdet(reduced_laplacian(e)), q(2, 3));
}

TEST(MatrixTree, RandomPlainEventsOnEightPoints) {
  RandomStream rng(3);
  const auto space = make_space(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto e = random_matrix(2, 3, space, rng, true);
    EXPECT_EQ(sum_tree_probabilities(e), pdet(reduced_laplacian(e)));
  }
}

TEST(MatrixTree, GeneralizedEventsToo) {
  RandomStream rng(5);
  for (int n = 2; n <= 5; ++n) {
    const auto space = make_space(3);
    for (int trial = 0; trial < 5; ++trial) {
      const auto e = random_matrix(n - 1, n, space, rng, false);
      EXPECT_EQ(sum_tree_probabilities(e), pdet(reduced_laplacian(e)));
    }
  }
}

TEST(Determinant, KnownValues) {
  EXPECT_EQ(determinant({{Rational(2), Rational(1)}, {Rational(1), Rational(3)}}), 5);
  EXPECT_EQ(determinant({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}), -1);
  EXPECT_EQ(determinant({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}), 0);
  EXPECT_EQ(determinant({{q(1, 2), Rational(0), Rational(0)},
                         {Rational(7), q(2, 3), Rational(0)},
                         {Rational(1), Rational(1), Rational(3)}}),
            1);
}

TEST(PaperSpace, Sizes) {
  EXPECT_EQ(PaperSpace(OccupancyVector({1, 1, 1}), 2).size(), 16u);
  EXPECT_EQ(PaperSpace(OccupancyVector({0, 0, 0}), 1).size(), 1u);
  EXPECT_EQ(PaperSpace(OccupancyVector({1, 0, 0}), 1).size(), 1u);
  EXPECT_THROW(build_paper_space(OccupancyVector({3, 0, 0}), 2), std::domain_error);
}

TEST(PaperSpace, PointsCoverTuplesTimesSurjections) {
  const PaperSpace space(OccupancyVector({1, 2, 1, 0}), 3);
  std::set<std::pair<std::vector<std::uint32_t>, std::vector<int>>> seen;
  for (std::size_t x = 0; x < space.size(); ++x) {
    const auto t = space.tuple_at(x);
    const auto f = space.assignment_at(x);
    EXPECT_EQ(occupancy(t), space.p());
    std::vector<std::uint32_t> masks;
    for (const auto& s : t.subsets()) masks.push_back(s.bits());
    for (int i = 1; i < 4; ++i) EXPECT_EQ(space.target(x, i), f(i));
    seen.insert({masks, std::vector<int>(f.values().begin(), f.values().end())});
  }
  EXPECT_EQ(seen.size(), space.size());
  EXPECT_EQ(space.size(), 3u * 3u * 3u * 1u * 6u);
}

TEST(PaperEvents, Examples) {
  const PaperSpace space(OccupancyVector({1, 1, 1}), 2);
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(event_I(space, i, i, SubsetRef::fixed(1)), GeneralizedEvent::full(space.space()));
    // S_2 = [3] only in the tuple ({}, [3]), which is in S_{p,r} but not M_{p,r}
    EXPECT_EQ(ge_probability(event_J(space, i, i, SubsetRef::fixed(2))), q(1, 8));
  }
  EXPECT_EQ(ge_probability(event_I(space, 1, 2, SubsetRef::fixed(1))), q(1, 2));
  const auto three_not_in_s2 = space.indicator([&](std::size_t x) {
    return !((space.subset_bits(x, 2) >> 2) & 1u);
  });
  EXPECT_EQ(ge_probability(three_not_in_s2), q(1, 2));
  EXPECT_EQ(event_J(space, 1, 3, SubsetRef::assigned_to(2)),
            event_I(space, 1, 3, SubsetRef::assigned_to(2)));
  EXPECT_THROW(event_I(space, 1, 2, SubsetRef::fixed(3)), std::invalid_argument);
  EXPECT_THROW(event_I(space, 1, 2, SubsetRef::assigned_to(3)), std::invalid_argument);
}

TEST(PaperMatrices, AlphaDeterminantForTheSmallestCase) {
  const PaperSpace space(OccupancyVector({1, 1, 1}), 2);
  EXPECT_EQ(pdet(matrix_M(ArcRule::alpha, space)), q(3, 8));
  EXPECT_EQ(pdet(matrix_L_prime(ArcRule::alpha, space)), q(3, 8));
  EXPECT_EQ(q(8, 6) * pdet(matrix_L_prime(ArcRule::alpha, space)), q(1, 2));
}

TEST(PaperMatrices, DeterminantsMatchPointwiseReference) {
  for (const auto& p : {OccupancyVector({1, 1, 1}), OccupancyVector({2, 1, 0}),
                        OccupancyVector({1, 2, 1, 1}), OccupancyVector({0, 1, 2, 2})}) {
    const int r = p.k() == 3 ? 2 : 3;
    const PaperSpace space(p, r);
    const int k = p.k();
    for (ArcRule z : kAllRules) {
      const auto m = matrix_M(z, space);
      EXPECT_EQ(pdet(m), oracle::pdet(m)) << rule_name(z) << ' ' << to_string(p);
    }
    for (int a = 1; a <= k; ++a) {
      const auto qa = matrix_Q_a(a, space);
      EXPECT_EQ(pdet(qa), oracle::pdet(qa));
    }
    const auto md = matrix_M_D(SubsetMask::of(k - 1, {1}), space);
    EXPECT_EQ(pdet(md), oracle::pdet(md));
  }
}

TEST(PaperMatrices, LPrimeDeterminantIsScaledTreeProbability) {
  const PaperSpace space(OccupancyVector({1, 2, 1, 1}), 3);
  for (ArcRule z : kTheoremRules) {
    const Rational p = exact_tree_probability(z, space.p(), 3);
    const Rational scale = make_rational(cardinality_M(space.p(), 3), cardinality_S(space.p(), 3));
    EXPECT_EQ(pdet(matrix_L_prime(z, space)), scale * p) << rule_name(z);
  }
}

TEST(PaperMatrices, EmptyAndFullDCases) {
  const PaperSpace space(OccupancyVector({1, 1, 1}), 2);
  const Rational scale = q(6, 8);
  const auto conditional = [&](std::uint32_t d) {
    return conditional_tuple_probability(space.p(), 2, [d](const SubsetTuple& t) {
      return !t.subset(1).contains(3) && (t.subset(1).bits() & d) == d;
    });
  };
  for (std::uint32_t d = 0; d < 4; ++d) {
    EXPECT_EQ(pdet(matrix_M_D(SubsetMask(2, d), space)), scale * conditional(d)) << d;
  }
}

TEST(PaperMatrices, RangeErrors) {
  const PaperSpace space(OccupancyVector({1, 1, 1}), 2);
  EXPECT_THROW(matrix_L_prime(ArcRule::delta, space), std::invalid_argument);
  EXPECT_THROW(matrix_M_a(ArcRule::alpha, 0, space), std::invalid_argument);
  EXPECT_THROW(matrix_M_a(ArcRule::alpha, 4, space), std::invalid_argument);
  EXPECT_THROW(matrix_M_a(ArcRule::beta, 3, space), std::invalid_argument);
  EXPECT_THROW(matrix_M_a(ArcRule::gamma, 1, space), std::invalid_argument);
  EXPECT_THROW(matrix_N_a(ArcRule::alpha, 1, space), std::invalid_argument);
  EXPECT_THROW(matrix_Q_a(4, space), std::invalid_argument);
  EXPECT_THROW(matrix_M_D(SubsetMask::of(3, {3}), space), std::invalid_argument);
}

TEST(PaperMatrices, AlphaStageEndpointsCoincideWithM) {
  const PaperSpace space(OccupancyVector({1, 2, 1, 1}), 3);
  const auto m = matrix_M(ArcRule::alpha, space);
  EXPECT_EQ(matrix_M_a(ArcRule::alpha, 1, space), m);
  EXPECT_EQ(matrix_M_a(ArcRule::alpha, 2, space), m);
  EXPECT_EQ(matrix_M_a(ArcRule::beta, 4 - 1, space), matrix_M_beta_prime(space));
}
