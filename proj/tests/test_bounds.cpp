#include <gtest/gtest.h>

#include <random>

#include "brute.hpp"
#include "fixtures.hpp"
#include "netmon/bounds.hpp"

namespace netmon {
namespace {

using testing::disjoint_pair;
using testing::ex1;

// Two triangles of pair-locations: covers need 2 + 2, packings 1 + 1.
Instance two_triangles(double level) {
  return Instance::from_ids({"a", "b", "c", "d", "e", "f"},
                            {{"u1", level}, {"u2", level}, {"u3", level},
                             {"v1", level}, {"v2", level}, {"v3", level}},
                            {{"a", {"u1", "u2"}}, {"b", {"u1", "u3"}}, {"c", {"u2", "u3"}},
                             {"d", {"v1", "v2"}}, {"e", {"v1", "v3"}}, {"f", {"v2", "v3"}}});
}

// Objective of the marginal game: locations in the node basis are worth
// their expected criticality-adjusted level, uncovered components their level.
double marginal_game_value(const Instance& inst, const MixedStrategy& s) {
  const auto basis = node_basis(s);
  const auto rho = marginals_of(inst.num_locations(), s);
  double v = 1.0;
  for (LocationIndex x : basis) {
    const double c = testing::crit(inst, x);
    v = std::min(v, c + (1.0 - c) * rho.values[x]);
  }
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    if (testing::payoff(inst, basis, u) < 1.0) v = std::min(v, inst.security_level(u));
  }
  return v;
}

TEST(CoverAndPacking, Examples) {
  const auto inst = ex1();
  EXPECT_EQ(min_set_cover(inst).size, 3);
  EXPECT_EQ(max_set_packing(inst).size, 3);
  const auto single =
      Instance::from_ids({"x"}, {{"u", 0.2}, {"v", 0.4}}, {{"x", {"u", "v"}}});
  EXPECT_EQ(min_set_cover(single).size, 1);
  EXPECT_EQ(max_set_packing(single).size, 1);
  EXPECT_EQ(min_set_cover(disjoint_pair()).size, 2);
  EXPECT_EQ(max_set_packing(disjoint_pair()).size, 2);
  const auto tri = two_triangles(0.5);
  EXPECT_EQ(min_set_cover(tri).size, 4);
  EXPECT_EQ(max_set_packing(tri).size, 2);
  EXPECT_TRUE(check_cover(tri, min_set_cover(tri).locations));
  EXPECT_TRUE(check_packing(tri, max_set_packing(tri).components));
}

TEST(CoverAndPacking, MatchEnumeration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testing::random_instance(rng, 2 + rng() % 7, 3 + rng() % 10, 0.3);
    EXPECT_EQ(min_set_cover(inst).size, testing::brute_min_cover(inst));
    EXPECT_EQ(max_set_packing(inst).size, testing::brute_max_packing(inst));
  }
}

TEST(SolveGcs, Ex1) {
  const auto inst = ex1();
  const auto g = solve_gcs(inst, 1);
  EXPECT_NEAR(g.value, 0.5, 1e-9);
  EXPECT_EQ(g.chosen, std::vector<LocationIndex>{inst.location_index("x2")});
  EXPECT_EQ(g.marginals.values, (std::vector<double>{0.0, 1.0, 0.0}));
  EXPECT_NEAR(solve_gcs(inst, 2).value, testing::brute_lower(inst, 2), 1e-9);
}

TEST(SolveGcs, Ex1Milp) {
  const auto inst = ex1();
  const auto g = solve_gcs(inst, 1, {}, GcsMethod::milp);
  EXPECT_NEAR(g.value, 0.5, 1e-9);
  EXPECT_EQ(g.chosen, std::vector<LocationIndex>{inst.location_index("x2")});
}

TEST(SolveGcs, DisjointPair) {
  const auto g = solve_gcs(disjoint_pair(), 1);
  EXPECT_NEAR(g.value, 11.0 / 15.0, 1e-9);
  EXPECT_EQ(g.chosen, (std::vector<LocationIndex>{0, 1}));
  EXPECT_NEAR(g.marginals.values[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(g.marginals.values[1], 1.0 / 3.0, 1e-12);
}

TEST(SolveGcs, MaxSupportBindsOnlyWhenSmall) {
  const auto inst = disjoint_pair();
  // With one location allowed, the best is to guard a and leave s at 0.6.
  EXPECT_NEAR(solve_gcs(inst, 1, 1).value, 0.6, 1e-9);
  EXPECT_NEAR(solve_gcs(inst, 1, 2).value, 11.0 / 15.0, 1e-9);
}

TEST(SolveGcs, MethodsAgree) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::random_instance(rng, 2 + rng() % 7, 3 + rng() % 9, 0.3);
    const int r = 1 + static_cast<int>(rng() % std::min<std::size_t>(3, inst.num_locations()));
    std::optional<int> cap;
    if (trial % 3 == 0) cap = r + static_cast<int>(rng() % 2);
    const auto a = solve_gcs(inst, r, cap, GcsMethod::threshold);
    const auto b = solve_gcs(inst, r, cap, GcsMethod::milp);
    EXPECT_NEAR(a.value, b.value, 1e-7) << "trial " << trial;
    if (cap) {
      EXPECT_LE(a.chosen.size(), static_cast<std::size_t>(*cap));
      EXPECT_LE(b.chosen.size(), static_cast<std::size_t>(*cap));
    }
    for (const auto* g : {&a, &b}) {
      EXPECT_NEAR(g->marginals.sum(), r, 1e-9);
      EXPECT_NEAR(testing::gcs_subset_value(inst, g->chosen, r), g->value, 1e-7);
    }
  }
}

TEST(UpperBound, Examples) {
  const auto inst = ex1();
  const auto ub = upper_bound(inst, 1);
  EXPECT_NEAR(ub.value, 2.0 / 3.0, 1e-9);
  EXPECT_EQ(ub.packing, (std::vector<ComponentIndex>{inst.component_index("u1"),
                                                     inst.component_index("u5"),
                                                     inst.component_index("u7")}));
  const auto full = upper_bound(inst, 3);
  EXPECT_EQ(full.value, 1.0);
  EXPECT_TRUE(full.packing.empty());
  EXPECT_NEAR(upper_bound(testing::ex1_homogeneous(0.2), 1).value, 7.0 / 15.0, 1e-9);
}

TEST(UpperBound, MethodsAgree) {
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::random_instance(rng, 3 + rng() % 6, 3 + rng() % 10, 0.25);
    const int r = 1 + static_cast<int>(rng() % 3);
    const auto a = upper_bound(inst, r, UpperBoundMethod::by_size);
    const auto b = upper_bound(inst, r, UpperBoundMethod::milp);
    EXPECT_NEAR(a.value, b.value, 1e-9) << "trial " << trial;
    EXPECT_NEAR(a.value, testing::brute_upper(inst, r), 1e-9) << "trial " << trial;
    for (const auto* u : {&a, &b}) {
      EXPECT_TRUE(check_packing(inst, u->packing));
      if (u->value < 1.0) {
        double s = 0.0;
        for (auto c : u->packing) s += 1.0 / (1.0 - inst.security_level(c));
        EXPECT_NEAR(1.0 - (static_cast<double>(u->packing.size()) - r) / s, u->value, 1e-9);
      }
    }
  }
}

TEST(UpperBound, Ex1Milp) {
  const auto inst = ex1();
  EXPECT_NEAR(upper_bound(inst, 1, UpperBoundMethod::milp).value, 2.0 / 3.0, 1e-9);
  EXPECT_EQ(upper_bound(inst, 3, UpperBoundMethod::milp).value, 1.0);
}

TEST(SolveApprox, Ex1) {
  const auto inst = ex1();
  const auto a = solve_approx(inst, 1);
  EXPECT_NEAR(a.lower, 0.5, 1e-9);
  EXPECT_NEAR(a.achieved, 0.5, 1e-9);
  EXPECT_NEAR(a.upper, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(a.gap, 1.0 / 6.0, 1e-9);
  EXPECT_NEAR(a.relative_gap, 0.25, 1e-9);
  EXPECT_EQ(a.strategy, MixedStrategy::point_mass(Placement{inst.location_index("x2")}));

  const auto c = solve_approx(inst, 3);
  EXPECT_EQ(c.lower, 1.0);
  EXPECT_EQ(c.achieved, 1.0);
  EXPECT_EQ(c.upper, 1.0);
  EXPECT_EQ(c.gap, 0.0);
}

TEST(SolveApprox, CoverShortcutPadsWithLowIndices) {
  const auto inst = Instance::from_ids({"a", "b", "c", "d"}, {{"u", 0.4}, {"v", 0.2}},
                                       {{"a", {"u"}}, {"b", {"u"}}, {"c", {"u"}}, {"d", {"u", "v"}}});
  const auto s = solve_approx(inst, 2);
  EXPECT_EQ(s.strategy, MixedStrategy::point_mass(Placement{0, 3}));
  EXPECT_EQ(s.gap, 0.0);
}

TEST(SolveApprox, DisjointPair) {
  const auto a = solve_approx(disjoint_pair(), 1);
  EXPECT_NEAR(a.lower, 11.0 / 15.0, 1e-9);
  EXPECT_NEAR(a.achieved, 11.0 / 15.0, 1e-9);
  EXPECT_NEAR(a.upper, 11.0 / 15.0, 1e-9);
  EXPECT_NEAR(a.gap, 0.0, 1e-9);
}

TEST(Homogeneous, Ex1Topology) {
  const auto h = homogeneous_solution(testing::ex1_homogeneous(0.2), 1);
  EXPECT_NEAR(h.lower, 7.0 / 15.0, 1e-12);
  EXPECT_NEAR(h.upper, 7.0 / 15.0, 1e-12);
  ASSERT_EQ(h.strategy.support_size(), 3u);
  for (const auto& a : h.strategy.atoms()) {
    EXPECT_EQ(a.placement.size(), 1u);
    EXPECT_NEAR(a.probability, 1.0 / 3.0, 1e-15);
  }
}

TEST(Homogeneous, TwoTriangles) {
  const auto h = homogeneous_solution(two_triangles(0.5), 1);
  EXPECT_NEAR(h.lower, 0.625, 1e-12);
  EXPECT_NEAR(h.upper, 0.75, 1e-12);
  EXPECT_GE(h.achieved, h.lower - 1e-12);
}

TEST(Homogeneous, ZeroLevel) {
  const auto h = homogeneous_solution(testing::ex1_homogeneous(0.0), 1);
  EXPECT_NEAR(h.lower, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(h.upper, 1.0 / 3.0, 1e-12);
}

TEST(Homogeneous, CyclingMarginals) {
  const auto tri = two_triangles(0.4);
  for (int r : {1, 2, 3}) {
    const auto h = homogeneous_solution(tri, r);
    const auto rho = marginals_of(tri.num_locations(), h.strategy);
    for (LocationIndex x : h.chosen) EXPECT_NEAR(rho.values[x], r / 4.0, 1e-12);
    EXPECT_EQ(h.strategy.support_size(), static_cast<std::size_t>(4 / std::gcd(4, r)));
  }
}

TEST(Homogeneous, Preconditions) {
  EXPECT_THROW(homogeneous_solution(ex1(), 1), PreconditionError);
  EXPECT_THROW(homogeneous_solution(testing::ex1_homogeneous(0.2), 3), PreconditionError);
}

TEST(Disjoint, Examples) {
  const auto d = disjoint_solution(disjoint_pair(), 1);
  EXPECT_NEAR(d.lower, 11.0 / 15.0, 1e-12);
  EXPECT_NEAR(d.upper, 11.0 / 15.0, 1e-12);
  EXPECT_NEAR(d.achieved, 11.0 / 15.0, 1e-12);

  const auto three = Instance::from_ids({"a", "b", "c"}, {{"p", 0.2}, {"q", 0.2}, {"s", 0.2}},
                                        {{"a", {"p"}}, {"b", {"q"}}, {"c", {"s"}}});
  const auto t = disjoint_solution(three, 1);
  EXPECT_NEAR(t.lower, 7.0 / 15.0, 1e-12);
  const auto rho = marginals_of(3, t.strategy);
  for (double v : rho.values) EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);

  EXPECT_EQ(disjoint_solution(disjoint_pair(), 2).lower, 1.0);
  EXPECT_THROW(disjoint_solution(ex1(), 1), PreconditionError);
}

// Lower bound, strategy value and upper bound against the enumeration oracles.
TEST(Bounds, RandomSuite) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::random_instance(rng, 2 + rng() % 7, 3 + rng() % 10, 0.3);
    const int r = 1 + static_cast<int>(rng() % std::min<std::size_t>(3, inst.num_locations()));
    const double lo = testing::brute_lower(inst, r);
    const double hi = testing::brute_upper(inst, r);
    const auto g = solve_gcs(inst, r);
    EXPECT_NEAR(g.value, lo, 1e-7) << "trial " << trial;
    EXPECT_NEAR(upper_bound(inst, r).value, hi, 1e-7) << "trial " << trial;
    const auto a = solve_approx(inst, r);
    EXPECT_LE(a.lower, a.upper + 1e-7);
    EXPECT_LE(a.achieved, a.upper + 1e-7);
    EXPECT_GE(a.achieved, a.lower - 1e-7) << "trial " << trial;
    for (const auto& atom : a.strategy.atoms()) {
      EXPECT_EQ(atom.placement.size(), static_cast<std::size_t>(r));
    }
    if (r < min_set_cover(inst).size) {
      const auto strategy = decompose(g.marginals, r);
      const auto back = marginals_of(inst.num_locations(), strategy);
      for (std::size_t x = 0; x < back.values.size(); ++x) {
        EXPECT_NEAR(back.values[x], g.marginals.values[x], 1e-8);
      }
      EXPECT_NEAR(marginal_game_value(inst, strategy), g.value, 1e-7) << "trial " << trial;
    }
  }
}

TEST(Bounds, Deterministic) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testing::random_instance(rng, 7, 11, 0.3);
    const auto a = solve_approx(inst, 2), b = solve_approx(inst, 2);
    EXPECT_EQ(a.strategy, b.strategy);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.upper, b.upper);
    EXPECT_EQ(a.chosen, b.chosen);
  }
}

}  // namespace
}  // namespace netmon
