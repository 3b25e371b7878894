#include <gtest/gtest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "treeprob/core.hpp"

using namespace treeprob;

TEST(Wrap, MapsOntoOneToK) {
  EXPECT_EQ(wrap(0, 5), 5);
  EXPECT_EQ(wrap(6, 5), 1);
  EXPECT_EQ(wrap(-4, 5), 1);
  EXPECT_EQ(wrap(3, 5), 3);
}

TEST(SubsetMask, BasicQueries) {
  const auto s = SubsetMask::of(7, {1, 3, 6, 7});
  EXPECT_TRUE(s.contains(6));
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(s.size(), 4);
  EXPECT_EQ(s.complement(), SubsetMask::of(7, {2, 4, 5}));
  EXPECT_TRUE(SubsetMask::full(4).is_full());
  EXPECT_TRUE(SubsetMask::empty(4).is_empty());
  EXPECT_EQ(to_string(s), "{1,3,6,7}");
  EXPECT_EQ(to_string(SubsetMask::empty(3)), "{}");
  EXPECT_THROW(SubsetMask(3, 0b1000), std::invalid_argument);
  EXPECT_THROW(SubsetMask::of(3, {4}), std::invalid_argument);
}

TEST(CyclicInterval, Examples) {
  EXPECT_EQ(cyclic_interval(3, 3, 5), SubsetMask::empty(5));
  EXPECT_EQ(cyclic_interval(3, 4, 5), SubsetMask::of(5, {4}));
  EXPECT_EQ(cyclic_interval(4, 2, 5), SubsetMask::of(5, {5, 1, 2}));
  EXPECT_EQ(cyclic_interval(2, 1, 5), SubsetMask::of(5, {3, 4, 5, 1}));
  EXPECT_THROW(cyclic_interval(0, 2, 5), std::invalid_argument);
}

TEST(CyclicInterval, MatchesReference) {
  for (int k = 1; k <= 7; ++k) {
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= k; ++j) {
        const auto expected = oracle::interval(i, j, k);
        const auto got = cyclic_interval(i, j, k).elements();
        EXPECT_EQ(std::set<int>(got.begin(), got.end()), expected) << i << ' ' << j << ' ' << k;
      }
    }
  }
}

TEST(ArcRules, Examples) {
  EXPECT_EQ(map_alpha(5, SubsetMask::of(7, {1, 3, 6, 7})), 2);
  EXPECT_EQ(map_alpha(1, SubsetMask::empty(3)), 2);
  EXPECT_EQ(map_beta(1, SubsetMask::of(4, {2, 3})), 3);
  EXPECT_EQ(map_beta(1, SubsetMask::empty(4)), 1);
  EXPECT_EQ(map_gamma(2, SubsetMask::of(3, {2})), 1);
  EXPECT_EQ(map_gamma(1, SubsetMask::of(4, {2, 3})), 3);
  EXPECT_EQ(map_gamma(1, SubsetMask::of(4, {1})), 4);
  EXPECT_EQ(map_delta(2, SubsetMask::of(3, {2})), 2);
  EXPECT_EQ(map_delta(1, SubsetMask::of(4, {2, 3})), 4);
  for (int i = 1; i <= 5; ++i) {
    for (ArcRule z : kAllRules) EXPECT_EQ(apply_rule(z, i, SubsetMask::full(5)), i);
  }
}

TEST(ArcRules, AgreeWithDefinitionsOnEverySubset) {
  for (int k = 1; k <= 7; ++k) {
    for (std::uint32_t bits = 0; bits < (1u << k); ++bits) {
      const SubsetMask s(k, bits);
      const auto set = oracle::to_set(bits, k);
      for (int i = 1; i <= k; ++i) {
        for (ArcRule z : kAllRules) {
          ASSERT_EQ(apply_rule(z, i, s), oracle::rule(z, i, set, k))
              << rule_name(z) << " i=" << i << " S=" << to_string(s);
        }
      }
    }
  }
}

TEST(ArcRules, CrossRuleRelations) {
  for (int k = 2; k <= 8; ++k) {
    for (std::uint32_t bits = 0; bits + 1 < (1u << k); ++bits) {
      const SubsetMask s(k, bits);
      for (int i = 1; i <= k; ++i) {
        EXPECT_EQ(map_beta(i, s), wrap(map_alpha(i, s) - 1, k));
        EXPECT_FALSE(s.contains(map_alpha(i, s)));
        if (!s.contains(i)) {
          EXPECT_EQ(map_gamma(i, s), map_beta(i, s));
          EXPECT_EQ(map_delta(i, s), map_alpha(i, s));
        }
      }
    }
  }
}

TEST(Digraph, BuildExamples) {
  const SubsetTuple empties(3, {SubsetMask::empty(3), SubsetMask::empty(3)});
  const AssignmentMap f({1, 2}, 2, AssignmentMode::surjection);
  const auto g = build_digraph(empties, f, ArcRule::alpha);
  EXPECT_EQ(g.arcs(), (std::vector<Arc>{{1, 2}, {2, 3}}));
  EXPECT_TRUE(is_rooted_tree(g));

  const SubsetTuple with_full(3, {SubsetMask::full(3), SubsetMask::empty(3)});
  for (ArcRule z : kAllRules) {
    EXPECT_TRUE(build_digraph(with_full, AssignmentMap({1, 1}, 2, AssignmentMode::function), z)
                    .has_loop());
  }
  EXPECT_THROW(build_digraph(empties, AssignmentMap({1, 2, 1}, 2, AssignmentMode::surjection),
                             ArcRule::alpha),
               std::invalid_argument);
}

TEST(Digraph, TreeExamples) {
  EXPECT_TRUE(is_rooted_tree(Digraph(3, {2, 3})));
  EXPECT_FALSE(is_rooted_tree(Digraph(3, {2, 1})));
  EXPECT_TRUE(is_rooted_tree(Digraph(3, {3, 3})));
  EXPECT_FALSE(is_rooted_tree(Digraph(3, {1, 3})));
  EXPECT_TRUE(is_pseudoforest(Digraph(3, {1, 3})));
  EXPECT_FALSE(is_pseudoforest(Digraph(3, {2, 1})));
  EXPECT_THROW(Digraph(3, {1}), std::invalid_argument);
  EXPECT_THROW(Digraph(3, {1, 4}), std::invalid_argument);
}

TEST(Digraph, TreeAndPseudoforestMatchReferenceExhaustively) {
  for (int k = 2; k <= 6; ++k) {
    std::vector<int> e(static_cast<std::size_t>(k - 1), 1);
    int trees = 0;
    while (true) {
      const Digraph g(k, e);
      ASSERT_EQ(is_rooted_tree(g), oracle::is_tree(e, k));
      ASSERT_EQ(is_pseudoforest(g), oracle::is_pseudoforest(e, k));
      trees += is_rooted_tree(g);
      std::size_t pos = 0;
      while (pos < e.size() && e[pos] == k) e[pos++] = 1;
      if (pos == e.size()) break;
      ++e[pos];
    }
    int expected = 1;
    for (int n = 0; n < k - 2; ++n) expected *= k;
    EXPECT_EQ(trees, expected) << "k=" << k;
  }
}

TEST(Occupancy, Examples) {
  EXPECT_EQ(occupancy(SubsetTuple(3, {SubsetMask::of(3, {1}), SubsetMask::of(3, {2, 3})})),
            OccupancyVector({1, 1, 1}));
  EXPECT_EQ(occupancy(SubsetTuple(4, {SubsetMask::empty(4), SubsetMask::empty(4)})),
            OccupancyVector({0, 0, 0, 0}));
  EXPECT_EQ(occupancy(SubsetTuple(3, {SubsetMask::full(3), SubsetMask::full(3)})),
            OccupancyVector({2, 2, 2}));
  EXPECT_FALSE(SubsetTuple(3, {SubsetMask::full(3)}).is_proper());
  EXPECT_EQ(to_string(OccupancyVector({1, 1, 1})), "(1,1,1)");
}

TEST(AssignmentMap, Validation) {
  EXPECT_NO_THROW(AssignmentMap({1, 2, 1}, 2, AssignmentMode::surjection));
  EXPECT_THROW(AssignmentMap({1, 1, 1}, 2, AssignmentMode::surjection), std::invalid_argument);
  EXPECT_NO_THROW(AssignmentMap({1, 1, 1}, 2, AssignmentMode::function));
  EXPECT_THROW(AssignmentMap({1, 3}, 2, AssignmentMode::function), std::invalid_argument);
  EXPECT_THROW(AssignmentMap({2, 1}, 2, AssignmentMode::identity), std::invalid_argument);
  EXPECT_EQ(AssignmentMap::identity(4).values().size(), 3u);
  EXPECT_EQ(AssignmentMap::identity(4)(3), 3);
}

TEST(Names, RoundTrip) {
  for (ArcRule z : kAllRules) EXPECT_EQ(parse_rule(rule_name(z)), z);
  for (auto m : {AssignmentMode::surjection, AssignmentMode::function, AssignmentMode::identity}) {
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  }
  EXPECT_FALSE(parse_rule("epsilon").has_value());
}

// k = 3, r = 2 under the first rule with f the identity: the digraph is a tree
// for exactly three disjoint families of (S_1, S_2), one per Cayley tree.
TEST(IntroExample, TreeConfigurationsAreTheThreeDrawnFamilies) {
  const int k = 3;
  const auto f = AssignmentMap::identity(k);
  int count[3] = {0, 0, 0};
  for (std::uint32_t b1 = 0; b1 < 7; ++b1) {
    for (std::uint32_t b2 = 0; b2 < 7; ++b2) {
      const SubsetMask s1(k, b1);
      const SubsetMask s2(k, b2);
      const bool a = !s1.contains(2) && !s2.contains(3);
      const bool b = s1.contains(2) && !s1.contains(3) && !s2.contains(3);
      const bool c = s1.contains(2) && !s1.contains(3) && s2.contains(3) && !s2.contains(1);
      const auto g = build_digraph(SubsetTuple(k, {s1, s2}), f, ArcRule::alpha);
      EXPECT_EQ(is_rooted_tree(g), a || b || c);
      EXPECT_LE(a + b + c, 1);
      if (a) EXPECT_EQ(g.endpoints()[0], 2);
      if (b) EXPECT_EQ(std::vector<int>(g.endpoints().begin(), g.endpoints().end()),
                       (std::vector<int>{3, 3}));
      if (c) EXPECT_EQ(std::vector<int>(g.endpoints().begin(), g.endpoints().end()),
                       (std::vector<int>{3, 1}));
      count[0] += a;
      count[1] += b;
      count[2] += c;
    }
  }
  EXPECT_GT(count[0], 0);
  EXPECT_GT(count[1], 0);
  EXPECT_GT(count[2], 0);
}
