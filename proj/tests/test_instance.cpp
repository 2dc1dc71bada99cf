#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "netmon/instance.hpp"

namespace netmon {
namespace {

using testing::disjoint_pair;
using testing::ex1;

Placement P(const Instance& inst, std::initializer_list<const char*> ids) {
  std::vector<LocationIndex> v;
  for (const char* id : ids) v.push_back(inst.location_index(id));
  return Placement(v);
}

std::vector<LocationIndex> L(const Instance& inst, std::initializer_list<const char*> ids) {
  std::vector<LocationIndex> v;
  for (const char* id : ids) v.push_back(inst.location_index(id));
  return v;
}

std::vector<ComponentIndex> U(const Instance& inst, std::initializer_list<const char*> ids) {
  std::vector<ComponentIndex> v;
  for (const char* id : ids) v.push_back(inst.component_index(id));
  return v;
}

TEST(Validate, Ex1IsClean) { EXPECT_TRUE(validate(ex1()).ok()); }

TEST(Validate, LevelOneIsRejected) {
  auto base = ex1();
  auto levels = base.security_levels();
  levels[base.component_index("u1")] = 1.0;
  std::vector<std::vector<ComponentIndex>> sets;
  for (LocationIndex x = 0; x < base.num_locations(); ++x) {
    sets.emplace_back(base.monitoring_set(x).begin(), base.monitoring_set(x).end());
  }
  Instance inst(base.location_ids(), base.component_ids(), levels, sets, 1);
  const auto report = validate(inst);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].message, "security level must be < 1");
  EXPECT_EQ(report.violations[0].ids, std::vector<std::string>{"u1"});
}

TEST(Validate, UnmonitoredComponentAndBudget) {
  auto inst = Instance::from_ids({"x1"}, {{"u1", 0.5}, {"u8", 0.3}}, {{"x1", {"u1"}}}, 0);
  const auto report = validate(inst);
  ASSERT_EQ(report.violations.size(), 2u);
  EXPECT_EQ(report.violations[0].message, "unmonitored component");
  EXPECT_EQ(report.violations[0].ids, std::vector<std::string>{"u8"});
  EXPECT_EQ(report.violations[1].message, "budget must be >= 1");
  EXPECT_THROW(require_valid(inst), InputError);
}

TEST(Validate, EmptyMonitoringSetAndNegativeLevel) {
  auto inst = Instance::from_ids({"x1", "x2"}, {{"u1", -0.1}}, {{"x1", {"u1"}}});
  const auto report = validate(inst);
  ASSERT_EQ(report.violations.size(), 2u);
  EXPECT_EQ(report.violations[0].message, "empty monitoring set");
  EXPECT_EQ(report.violations[1].message, "security level must be >= 0");
}

TEST(InstanceConstruction, StructuralErrors) {
  EXPECT_THROW(Instance::from_ids({"x1", "x1"}, {{"u1", 0.5}}, {{"x1", {"u1"}}}), InputError);
  EXPECT_THROW(Instance::from_ids({"x1"}, {{"u1", 0.5}}, {{"x1", {"u9"}}}), InputError);
  EXPECT_THROW(Instance::from_ids({"x1"}, {{"u1", 0.5}}, {{"x7", {"u1"}}}), InputError);
  EXPECT_THROW(ex1().location_index("nope"), InputError);
}

TEST(PostSecurity, Examples) {
  const auto inst = ex1();
  EXPECT_DOUBLE_EQ(post_security(inst, P(inst, {"x2", "x3"}), inst.component_index("u3")), 1.0);
  EXPECT_DOUBLE_EQ(post_security(inst, P(inst, {"x2", "x3"}), inst.component_index("u1")), 0.5);
  EXPECT_DOUBLE_EQ(post_security(inst, Placement{}, inst.component_index("u2")), 0.8);
  EXPECT_THROW(post_security(inst, Placement{}, 99), InputError);
}

TEST(PostSecurity, MonotoneAndTwoValued) {
  const auto inst = ex1();
  for (unsigned mask = 0; mask < 8; ++mask) {
    for (unsigned sup = mask; sup < 8; ++sup) {
      if ((sup & mask) != mask) continue;
      std::vector<LocationIndex> a, b;
      for (LocationIndex x = 0; x < 3; ++x) {
        if (mask >> x & 1) a.push_back(x);
        if (sup >> x & 1) b.push_back(x);
      }
      for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
        const double fa = post_security(inst, Placement(a), u);
        const double fb = post_security(inst, Placement(b), u);
        EXPECT_TRUE(fa == 1.0 || fa == inst.security_level(u));
        EXPECT_LE(fa, fb);
      }
    }
  }
}

TEST(Criticality, Examples) {
  const auto inst = ex1();
  EXPECT_DOUBLE_EQ(location_criticality(inst, inst.location_index("x1")), 0.2);
  EXPECT_DOUBLE_EQ(location_criticality(inst, inst.location_index("x3")), 0.2);
  auto single = Instance::from_ids({"a"}, {{"v", 0.7}}, {{"a", {"v"}}});
  EXPECT_DOUBLE_EQ(location_criticality(single, 0), 0.7);
  EXPECT_THROW(location_criticality(inst, 5), InputError);
}

TEST(PackingWeightSum, Examples) {
  const auto inst = ex1();
  EXPECT_NEAR(packing_weight_sum(inst, U(inst, {"u1", "u5", "u7"})), 6.0, 1e-12);
  EXPECT_NEAR(packing_weight_sum(inst, U(inst, {"u1", "u4"})), 3.25, 1e-12);
  EXPECT_EQ(packing_weight_sum(inst, {}), 0.0);
  const std::vector<ComponentIndex> bad{42};
  EXPECT_THROW(packing_weight_sum(inst, bad), InputError);
}

TEST(CoverAndPacking, Examples) {
  const auto inst = ex1();
  EXPECT_TRUE(check_cover(inst, L(inst, {"x1", "x2", "x3"})));
  EXPECT_FALSE(check_cover(inst, L(inst, {"x1", "x3"})));
  EXPECT_TRUE(check_packing(inst, U(inst, {"u1", "u5", "u7"})));
  EXPECT_FALSE(check_packing(inst, U(inst, {"u1", "u3"})));
}

TEST(KStar, Examples) {
  const auto inst = ex1();
  auto ks = k_star(inst, L(inst, {"x2", "x3"}), 1);
  EXPECT_EQ(ks.count, 2u);
  EXPECT_NEAR(ks.weight_sum, 2.5, 1e-12);
  EXPECT_NEAR(ks.value, 0.6, 1e-12);

  ks = k_star(inst, L(inst, {"x1", "x2", "x3"}), 1);
  EXPECT_EQ(ks.count, 3u);
  EXPECT_NEAR(ks.weight_sum, 3.75, 1e-12);
  EXPECT_NEAR(ks.value, 7.0 / 15.0, 1e-12);

  const auto pair = disjoint_pair();
  ks = k_star(pair, L(pair, {"a", "b"}), 1);
  EXPECT_EQ(ks.count, 2u);
  EXPECT_NEAR(ks.weight_sum, 3.75, 1e-12);
  EXPECT_NEAR(ks.value, 11.0 / 15.0, 1e-12);

  EXPECT_THROW(k_star(inst, L(inst, {"x2"}), 1), PreconditionError);
}

TEST(KStar, StopsBeforeSecureLocations) {
  // Criticalities 0.1, 0.1, 0.9 with one sensor: the third location is
  // already above the level the first two can be equalized to.
  auto inst = Instance::from_ids({"a", "b", "c"}, {{"p", 0.1}, {"q", 0.1}, {"s", 0.9}},
                                 {{"a", {"p"}}, {"b", {"q"}}, {"c", {"s"}}});
  const auto ks = k_star(inst, L(inst, {"a", "b", "c"}), 1);
  EXPECT_EQ(ks.count, 2u);
  EXPECT_NEAR(ks.value, 1.0 - 1.0 / (2.0 / 0.9), 1e-12);
}

TEST(OptimalMarginals, Examples) {
  const auto inst = ex1();
  auto rho = optimal_marginals(inst, L(inst, {"x2", "x3"}), 1);
  EXPECT_NEAR(rho.values[0], 0.0, 1e-12);
  EXPECT_NEAR(rho.values[1], 0.5, 1e-12);
  EXPECT_NEAR(rho.values[2], 0.5, 1e-12);

  rho = optimal_marginals(inst, L(inst, {"x1", "x2", "x3"}), 1);
  for (double v : rho.values) EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);

  const auto pair = disjoint_pair();
  rho = optimal_marginals(pair, L(pair, {"a", "b"}), 1);
  EXPECT_NEAR(rho.values[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rho.values[1], 1.0 / 3.0, 1e-12);
}

// Random location sets on random instances: the equalizing marginals are a
// valid marginal vector and k* satisfies its defining inequalities.
TEST(OptimalMarginals, PropertyOnRandomSets) {
  std::mt19937_64 rng(12345);
  const double scale[] = {0.0, 0.2, 0.4, 0.6, 0.8, 0.95};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 10;
    std::vector<std::string> locs, comps;
    std::vector<double> levels;
    std::vector<std::vector<ComponentIndex>> sets(n);
    for (std::size_t i = 0; i < n; ++i) {
      locs.push_back("x" + std::to_string(i));
      comps.push_back("u" + std::to_string(i));
      levels.push_back(scale[rng() % 6]);
      sets[i].push_back(i);
    }
    Instance inst(locs, comps, levels, sets, 1);
    const int r = 1 + static_cast<int>(rng() % (n - 1));
    std::vector<LocationIndex> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    const auto rho = optimal_marginals(inst, all, r);
    EXPECT_NEAR(rho.sum(), r, 1e-12);
    for (double v : rho.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    const auto ks = k_star(inst, all, r);
    EXPECT_GE(ks.count, static_cast<std::size_t>(r) + 1);
    EXPECT_LE(location_criticality(inst, ks.order[ks.count - 1]), ks.value + 1e-12);
    if (ks.count < n) {
      const double next = location_criticality(inst, ks.order[ks.count]);
      const double bound = 1.0 - (static_cast<double>(ks.count) + 1 - r) /
                                     (ks.weight_sum + 1.0 / (1.0 - next));
      EXPECT_GT(next, bound - 1e-12);
    }
  }
}

TEST(EvaluateStrategy, Examples) {
  const auto inst = ex1();
  auto v = evaluate_strategy(inst, MixedStrategy::point_mass(P(inst, {"x2", "x3"})));
  EXPECT_DOUBLE_EQ(v.value, 0.5);
  EXPECT_EQ(v.worst_components, U(inst, {"u1"}));

  MixedStrategy uniform({{P(inst, {"x1"}), 1.0 / 3}, {P(inst, {"x2"}), 1.0 / 3},
                         {P(inst, {"x3"}), 1.0 / 3}});
  v = evaluate_strategy(inst, uniform);
  EXPECT_NEAR(v.value, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(v.worst_components, U(inst, {"u1", "u5", "u7"}));

  v = evaluate_strategy(inst, MixedStrategy::point_mass(P(inst, {"x2"})));
  EXPECT_DOUBLE_EQ(v.value, 0.5);
  EXPECT_EQ(v.worst_components, U(inst, {"u1", "u7"}));
}

TEST(EvaluateStrategy, PointMassIsRowMinimum) {
  const auto inst = ex1();
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<LocationIndex> locs;
    for (LocationIndex x = 0; x < 3; ++x) {
      if (mask >> x & 1) locs.push_back(x);
    }
    const Placement p(locs);
    double lowest = 1.0;
    for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
      lowest = std::min(lowest, post_security(inst, p, u));
    }
    EXPECT_EQ(evaluate_strategy(inst, MixedStrategy::point_mass(p)).value, lowest);
  }
}

TEST(Marginals, Examples) {
  const auto inst = ex1();
  MixedStrategy uniform({{P(inst, {"x1"}), 1.0 / 3}, {P(inst, {"x2"}), 1.0 / 3},
                         {P(inst, {"x3"}), 1.0 / 3}});
  auto rho = marginals_of(3, uniform);
  for (double v : rho.values) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(node_basis(uniform).size(), 3u);

  const auto point = MixedStrategy::point_mass(P(inst, {"x2", "x3"}));
  rho = marginals_of(3, point);
  EXPECT_EQ(rho.values, (std::vector<double>{0.0, 1.0, 1.0}));
  EXPECT_EQ(node_basis(point), (std::vector<LocationIndex>{1, 2}));

  MixedStrategy half({{Placement{0, 1}, 0.5}, {Placement{0, 2}, 0.5}});
  rho = marginals_of(3, half);
  EXPECT_EQ(rho.values, (std::vector<double>{1.0, 0.5, 0.5}));
}

TEST(Marginals, SumIsExpectedPlacementSize) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int k = 0; k < 5; ++k) {
      std::vector<LocationIndex> locs;
      for (LocationIndex x = 0; x < 6; ++x) {
        if (rng() % 2) locs.push_back(x);
      }
      const double w = 1.0 + static_cast<double>(rng() % 10);
      atoms.push_back({Placement(locs), w});
      total += w;
    }
    for (auto& a : atoms) a.probability /= total;
    const MixedStrategy s(atoms);
    double expected_size = 0.0;
    for (const auto& a : s.atoms()) expected_size += a.probability * a.placement.size();
    EXPECT_NEAR(marginals_of(6, s).sum(), expected_size, 1e-12);
    EXPECT_EQ(node_basis(s).size(), marginals_of(6, s).support_size());
  }
}

TEST(MixedStrategy, RejectsBadMass) {
  EXPECT_THROW(MixedStrategy({{Placement{0}, 0.5}}), InputError);
  EXPECT_THROW(MixedStrategy({{Placement{0}, 1.5}, {Placement{1}, -0.5}}), InputError);
  MixedStrategy merged({{Placement{1, 0}, 0.25}, {Placement{0, 1}, 0.75}});
  ASSERT_EQ(merged.support_size(), 1u);
  EXPECT_EQ(merged.atoms()[0].probability, 1.0);
}

}  // namespace
}  // namespace netmon
