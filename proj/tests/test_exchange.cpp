#include <gtest/gtest.h>

#include <random>

#include "fairkc/exchange.hpp"

using namespace fairkc;

namespace {

using Clusters = std::vector<std::vector<Index>>;

// Three groups. Cluster 0: center 0 (g0) with a g1 member 1. Cluster 1: center 2 (g0) alone.
// Cluster 2: center 3 (g1) with a g2 member 4.
const std::vector<std::size_t> kChainGroups{0, 1, 0, 1, 2};
const Clusters kChainClusters{{0, 1}, {2}, {3, 4}};

}  // namespace

TEST(SwapGraph, HomogeneousClustersHaveNoEdges) {
  const std::vector<std::size_t> groups{0, 0, 1, 1};
  const auto g = build_swap_graph(CenterSet{0, 2}, Clusters{{0, 1}, {2, 3}}, groups, 2);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(SwapGraph, ChainScenarioEdges) {
  const auto g = build_swap_graph(CenterSet{0, 2, 3}, kChainClusters, kChainGroups, 3);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(SwapGraph, MixedClustersBothWays) {
  const std::vector<std::size_t> groups{0, 1, 1, 0};
  const auto g = build_swap_graph(CenterSet{0, 2}, Clusters{{0, 1}, {2, 3}}, groups, 2);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(Exchange, BalancedInputIsUntouched) {
  const std::vector<std::size_t> groups{0, 1, 1, 0};
  const auto r = exchange_and_partition(make_exchange_state(CenterSet{0, 2}, {{0, 1}, {2, 3}}, groups, {1, 1}));
  EXPECT_EQ(r.swap_count, 0u);
  EXPECT_TRUE(r.g_set.empty());
  EXPECT_EQ(r.centers, (CenterSet{0, 2}));
}

TEST(Exchange, ChainOfTwoSwapsBalancesThreeGroups) {
  const auto r = exchange_and_partition(make_exchange_state(CenterSet{0, 2, 3}, kChainClusters, kChainGroups, {1, 1, 1}));
  EXPECT_EQ(r.swap_count, 2u);
  EXPECT_EQ(r.chain_count, 1u);
  EXPECT_TRUE(r.g_set.empty());
  EXPECT_EQ(r.counts, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(r.centers, (CenterSet{1, 2, 4}));
}

TEST(Exchange, IsolatedSurplusGroupEndsUpInGSet) {
  // Group 0 holds two centers in pure clusters; group 1 needs one and is unreachable.
  const std::vector<std::size_t> groups{0, 0, 0, 1};
  const Clusters clusters{{0, 1}, {2}};
  const auto r = exchange_and_partition(make_exchange_state(CenterSet{0, 2}, clusters, groups, {1, 1}));
  EXPECT_EQ(r.swap_count, 0u);
  EXPECT_EQ(r.g_set, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(satisfies_closure_property(r, clusters, groups, 2));
  const std::vector<std::size_t> quotas{1, 1};
  EXPECT_TRUE(satisfies_quota_property(r, groups, quotas));
}

TEST(Exchange, QuotaSumMismatchThrows) {
  const std::vector<std::size_t> groups{0, 1};
  try {
    make_exchange_state(CenterSet{0}, {{0, 1}}, groups, {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuotaSumMismatch);
  }
}

TEST(Exchange, LargestExcessSurplusGoesFirst) {
  // Group 0 has excess 1, group 1 has excess 2; group 2 has shortfall 3.
  const std::vector<std::size_t> groups{0, 0, 2, 1, 1, 1, 2, 2};
  const Clusters clusters{{0}, {1, 2}, {3, 6}, {4, 7}, {5}};
  const auto r = exchange_and_partition(
      make_exchange_state(CenterSet{0, 1, 3, 4, 5}, clusters, groups, {1, 1, 3}));
  EXPECT_TRUE(r.g_set.empty());
  EXPECT_EQ(r.centers, (CenterSet{0, 2, 6, 7, 5}));
}

TEST(Exchange, RandomClusteringsKeepBothProperties) {
  std::mt19937_64 rng(21);
  for (int run = 0; run < 300; ++run) {
    const std::size_t m = 2 + rng() % 4;
    const std::size_t n = 10 + rng() % 40;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 10);
    std::vector<std::size_t> groups(n);
    for (auto& g : groups) g = rng() % m;
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Clusters clusters(k);
    CenterSet centers(k);
    for (std::size_t t = 0; t < k; ++t) {
      centers[t] = perm[t];
      clusters[t].push_back(perm[t]);
    }
    for (std::size_t i = k; i < n; ++i) clusters[rng() % k].push_back(perm[i]);
    std::vector<std::size_t> quotas(m, 0);
    for (std::size_t i = 0; i < k; ++i) ++quotas[rng() % m];

    const auto r = exchange_and_partition(make_exchange_state(centers, clusters, groups, quotas));
    for (auto& c : clusters) std::sort(c.begin(), c.end());
    EXPECT_TRUE(satisfies_closure_property(r, clusters, groups, m));
    EXPECT_TRUE(satisfies_quota_property(r, groups, quotas));
    EXPECT_LE(r.chain_count, k);
    EXPECT_LT(r.g_set.size(), m);
    EXPECT_EQ(r.g_set.empty(), r.counts == quotas);
    for (std::size_t t = 0; t < k; ++t)
      EXPECT_TRUE(std::binary_search(clusters[t].begin(), clusters[t].end(), r.centers[t]));
    EXPECT_EQ(r.final_graph, build_swap_graph(r.centers, clusters, groups, m));
  }
}
