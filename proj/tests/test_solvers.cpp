#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fairkc/generators.hpp"
#include "fairkc/oracle.hpp"
#include "fairkc/solvers.hpp"
#include "test_support.hpp"

using namespace fairkc;
using fairkc::testing::line_metric;

namespace {

const FairSolveConfig kDet{};

void expect_quota_exact(const Instance& inst, const SolveReport& r) {
  EXPECT_EQ(group_counts(inst.groups, r.centers, inst.group_count()), inst.quotas);
  CenterSet sorted = r.centers;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  for (Index c : r.centers) EXPECT_EQ(std::count(inst.c0.begin(), inst.c0.end(), c), 0);
  EXPECT_DOUBLE_EQ(r.cost, clustering_cost(inst, r.centers));
}

double m_group_bound(std::size_t m) { return 3.0 * std::pow(2.0, static_cast<double>(m) - 1.0) - 1.0; }

std::vector<std::string> names_of(const AdversarialInstance& a, const CenterSet& centers) {
  std::vector<std::string> out;
  for (Index c : centers) out.push_back(a.names[c]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(FairTwoGroups, MatchesGreedyWhenGreedyIsAlreadyFair) {
  const Instance inst{line_metric({0, 1, 8, 9}), {0, 0, 1, 1}, {1, 1}, {}};
  auto chooser = Chooser::deterministic();
  const auto greedy = greedy_k_center(inst, 2, chooser);
  const auto r = fair_two_groups(inst, kDet);
  EXPECT_EQ(r.centers, greedy.chosen);
  EXPECT_EQ(r.swaps_performed, 0u);
}

TEST(FairTwoGroups, WrongGroupCount) {
  const Instance inst{line_metric({0, 1, 2}), {0, 1, 2}, {1, 1, 1}, {}};
  try {
    fair_two_groups(inst, kDet);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongGroupCount);
  }
}

TEST(FairTwoGroups, InfeasibleQuotaRejected) {
  const Instance inst{line_metric({0, 1, 2}), {0, 0, 1}, {1, 2}, {}};
  EXPECT_THROW(fair_two_groups(inst, kDet), Error);
  EXPECT_THROW(fair_m_groups(inst, kDet), Error);
}

TEST(FairTwoGroups, Fig6ForcedRun) {
  const double delta = 0.05;
  const auto a = gen_adversarial(AdversarialKind::Fig6, delta);
  const auto r = fair_two_groups(a.instance, kDet);
  EXPECT_EQ(names_of(a, r.centers), (std::vector<std::string>{"f5", "m2", "m4", "m5"}));
  EXPECT_EQ(r.swaps_performed, 2u);
  EXPECT_NEAR(r.cost, 5.0 - delta / 2.0, 1e-12);
  const auto opt = brute_force_fair(a.instance);
  EXPECT_NEAR(opt.opt_value, 1.0 + delta, 1e-12);
  expect_quota_exact(a.instance, r);
}

TEST(FairMGroups, Fig7ForcedRun) {
  const double delta = 0.05;
  const auto a = gen_adversarial(AdversarialKind::Fig7, delta);
  const auto r = fair_m_groups(a.instance, kDet);
  EXPECT_EQ(names_of(a, r.centers), (std::vector<std::string>{"f2", "m2", "m4", "m5", "m6", "z2"}));
  EXPECT_DOUBLE_EQ(r.cost, 8.0);
  EXPECT_NEAR(brute_force_fair(a.instance).opt_value, 1.0 + 1.5 * delta, 1e-12);
  expect_quota_exact(a.instance, r);
}

TEST(FairMGroups, SingleGroupEqualsGreedy) {
  std::mt19937_64 rng(7);
  for (std::size_t t = 0; t < 20; ++t) {
    const auto inst = fairkc::testing::random_fair_instance(10, 1, t, rng);
    auto chooser = Chooser::deterministic();
    const auto greedy = greedy_k_center(inst, inst.k(), chooser);
    EXPECT_EQ(fair_m_groups(inst, kDet).centers, greedy.chosen);
    EXPECT_EQ(heuristic_a(inst, kDet).centers, greedy.chosen);
    EXPECT_EQ(heuristic_b(inst, kDet).centers, greedy.chosen);
  }
}

TEST(HeuristicA, SeparatedGroupsStayNearOptimal) {
  // Five points per group, groups 100 apart.
  const Instance inst{line_metric({0, 1, 2, 3, 4, 100, 101, 102, 103, 104}),
                      {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, {2, 2}, {}};
  const auto r = heuristic_a(inst, kDet);
  expect_quota_exact(inst, r);
  EXPECT_LE(r.cost, 2.0 * brute_force_fair(inst).opt_value);
}

TEST(HeuristicA, UnboundedRatioFixture) {
  // Group 0 is the single point at 0; group 1 has a point at 1 and one at L.
  // Per-group greedy opens group 1 at its first point, next to group 0's
  // center, and leaves L uncovered. The optimum pairs 0 with L at cost 1.
  for (double L : {10.0, 100.0, 1000.0}) {
    const Instance inst{line_metric({0, 1, L}), {0, 1, 1}, {1, 1}, {}};
    const auto r = heuristic_a(inst, kDet);
    const double opt = brute_force_fair(inst).opt_value;
    expect_quota_exact(inst, r);
    EXPECT_DOUBLE_EQ(opt, 1.0);
    EXPECT_DOUBLE_EQ(r.cost, L - 1.0);
  }
}

TEST(HeuristicB, FillsRemainingGroupByItsFarthestPoint) {
  // Points 0 (g0), 1 (g1), 10 (g0), 3 (g1). After picking point 0 the group-0
  // quota is full; 10 is farthest overall but the pick must be the g1 point at 3.
  const Instance inst{line_metric({0, 1, 10, 3}), {0, 1, 0, 1}, {1, 1}, {}};
  const auto r = heuristic_b(inst, kDet);
  EXPECT_EQ(r.centers, (CenterSet{0, 3}));
}

TEST(Solvers, SeededRunsAreReproducible) {
  std::mt19937_64 rng(12);
  const auto inst = fairkc::testing::random_fair_instance(12, 3, 0, rng);
  const FairSolveConfig cfg{SelectionMode::SeededRandom, 77};
  for (auto solver : {fair_m_groups, heuristic_a, heuristic_b, unfair_greedy}) {
    const auto a = solver(inst, cfg);
    const auto b = solver(inst, cfg);
    EXPECT_EQ(a.centers, b.centers);
    EXPECT_EQ(a.cost, b.cost);
    EXPECT_EQ(a.swaps_performed, b.swaps_performed);
    EXPECT_EQ(a.recursion_depth, b.recursion_depth);
  }
}

TEST(Solvers, BoundsAndQuotasAgainstIndependentOracle) {
  std::mt19937_64 rng(31);
  for (std::size_t t = 0; t < 150; ++t) {
    const std::size_t m = 2 + t % 3;
    const std::size_t n = 6 + t % 6;
    const auto inst = fairkc::testing::random_fair_instance(n, m, t, rng);
    const double opt = fairkc::testing::naive_fair_opt(inst);
    const double unfair = fairkc::testing::naive_unfair_opt(inst, inst.k());
    EXPECT_LE(unfair, opt);
    for (auto mode : {SelectionMode::Deterministic, SelectionMode::SeededRandom}) {
      const FairSolveConfig cfg{mode, t};
      const auto rm = fair_m_groups(inst, cfg);
      expect_quota_exact(inst, rm);
      EXPECT_TRUE(within_factor(rm.cost, m_group_bound(m), opt)) << "trial " << t;
      EXPECT_LE(rm.recursion_depth, m);
      if (m == 2) {
        const auto r2 = fair_two_groups(inst, cfg);
        expect_quota_exact(inst, r2);
        EXPECT_TRUE(within_factor(r2.cost, 5.0, opt)) << "trial " << t;
      }
      for (auto heuristic : {heuristic_a, heuristic_b}) {
        const auto rh = heuristic(inst, cfg);
        expect_quota_exact(inst, rh);
        EXPECT_GE(rh.cost, opt - 1e-12);
      }
    }
  }
}
