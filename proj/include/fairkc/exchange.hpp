#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairkc/core.hpp"

namespace fairkc {

/// Directed graph on groups: i -> j iff some cluster whose current center is
/// in group i has a member in group j (i != j).
class SwapGraph {
 public:
  explicit SwapGraph(std::size_t m = 0) : m_(m), adjacency_(m * m, 0) {}

  std::size_t group_count() const noexcept { return m_; }
  bool has_edge(std::size_t from, std::size_t to) const noexcept { return adjacency_[from * m_ + to] != 0; }
  void add_edge(std::size_t from, std::size_t to) noexcept {
    if (from != to) adjacency_[from * m_ + to] = 1;
  }

  std::size_t edge_count() const noexcept {
    return static_cast<std::size_t>(std::count(adjacency_.begin(), adjacency_.end(), char{1}));
  }

  /// Breadth-first parents from `source`, neighbors scanned in ascending id.
  /// parent[source] == source; unreachable groups get npos.
  std::vector<std::size_t> bfs_parents(std::size_t source) const {
    std::vector<std::size_t> parent(m_, npos);
    parent[source] = source;
    std::queue<std::size_t> frontier;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v = 0; v < m_; ++v) {
        if (has_edge(u, v) && parent[v] == npos) {
          parent[v] = u;
          frontier.push(v);
        }
      }
    }
    return parent;
  }

  /// Groups reachable from any of `sources` (sources included).
  std::vector<char> reachable_from(std::span<const std::size_t> sources) const {
    std::vector<char> seen(m_, 0);
    for (std::size_t s : sources) {
      for (std::size_t g = 0; const std::size_t p : bfs_parents(s)) {
        if (p != npos) seen[g] = 1;
        ++g;
      }
    }
    return seen;
  }

  friend bool operator==(const SwapGraph&, const SwapGraph&) = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t m_;
  std::vector<char> adjacency_;
};

inline SwapGraph build_swap_graph(std::span<const Index> centers, const std::vector<std::vector<Index>>& clusters,
                                  std::span<const std::size_t> groups, std::size_t m) {
  SwapGraph graph(m);
  for (std::size_t t = 0; t < centers.size(); ++t) {
    const std::size_t from = groups[centers[t]];
    for (Index y : clusters[t]) graph.add_edge(from, groups[y]);
  }
  return graph;
}

/// Working state of the exchange procedure. clusters[t] holds the members of
/// the cluster that centers[t] serves; it never changes, only which member is
/// the center does.
struct ExchangeState {
  CenterSet centers;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> quotas;
  std::vector<std::vector<Index>> clusters;
  std::span<const std::size_t> groups;
};

inline ExchangeState make_exchange_state(CenterSet centers, std::vector<std::vector<Index>> clusters,
                                         std::span<const std::size_t> groups, std::vector<std::size_t> quotas) {
  std::size_t total = 0;
  for (std::size_t q : quotas) total += q;
  if (total != centers.size()) {
    throw Error(ErrorCode::QuotaSumMismatch, "quotas sum to " + std::to_string(total) + " but there are " +
                                                 std::to_string(centers.size()) + " centers");
  }
  if (clusters.size() != centers.size()) {
    throw Error(ErrorCode::BadParameters, "need exactly one cluster per center");
  }
  for (auto& members : clusters) std::sort(members.begin(), members.end());
  ExchangeState state;
  state.counts = group_counts(groups, centers, quotas.size());
  state.centers = std::move(centers);
  state.quotas = std::move(quotas);
  state.clusters = std::move(clusters);
  state.groups = groups;
  return state;
}

struct PartitionResult {
  CenterSet centers;
  /// Residual groups, ascending. Empty iff every quota is met.
  std::vector<std::size_t> g_set;
  /// Individual center replacements.
  std::size_t swap_count = 0;
  /// Completed surplus-to-deficit chains (while-loop iterations).
  std::size_t chain_count = 0;
  std::vector<std::size_t> counts;
  SwapGraph final_graph;
};

namespace detail {

struct ChainChoice {
  std::vector<std::size_t> path;  // group ids from surplus to deficit
};

inline std::optional<ChainChoice> select_chain(const ExchangeState& state, const SwapGraph& graph) {
  const std::size_t m = state.quotas.size();
  std::vector<std::size_t> surplus;
  for (std::size_t g = 0; g < m; ++g)
    if (state.counts[g] > state.quotas[g]) surplus.push_back(g);
  std::stable_sort(surplus.begin(), surplus.end(), [&](std::size_t a, std::size_t b) {
    return state.counts[a] - state.quotas[a] > state.counts[b] - state.quotas[b];
  });
  for (std::size_t r : surplus) {
    const auto parent = graph.bfs_parents(r);
    std::size_t target = SwapGraph::npos;
    std::size_t shortfall = 0;
    for (std::size_t s = 0; s < m; ++s) {
      if (parent[s] == SwapGraph::npos || state.counts[s] >= state.quotas[s]) continue;
      const std::size_t gap = state.quotas[s] - state.counts[s];
      if (gap > shortfall) {
        shortfall = gap;
        target = s;
      }
    }
    if (target == SwapGraph::npos) continue;
    ChainChoice chain;
    for (std::size_t v = target; v != r; v = parent[v]) chain.path.push_back(v);
    chain.path.push_back(r);
    std::reverse(chain.path.begin(), chain.path.end());
    return chain;
  }
  return std::nullopt;
}

}  // namespace detail

/// Swaps centers for members of their own clusters along shortest surplus ->
/// deficit chains in the swap graph until quotas are met or no chain exists.
/// The returned g_set G satisfies: clusters whose center is in G contain only
/// members of G-groups, and groups outside G are at or under quota.
inline PartitionResult exchange_and_partition(ExchangeState state) {
  const std::size_t m = state.quotas.size();
  const std::size_t k = state.centers.size();
  PartitionResult result;

  SwapGraph graph = build_swap_graph(state.centers, state.clusters, state.groups, m);
  while (state.counts != state.quotas) {
    const auto chain = detail::select_chain(state, graph);
    if (!chain) break;
    if (result.chain_count == k) throw std::logic_error("exchange exceeded k chain iterations");
    const auto& path = chain->path;
    for (std::size_t hop = 0; hop + 1 < path.size(); ++hop) {
      const std::size_t from = path[hop];
      const std::size_t to = path[hop + 1];
      bool swapped = false;
      for (std::size_t t = 0; t < k && !swapped; ++t) {
        if (state.groups[state.centers[t]] != from) continue;
        for (Index y : state.clusters[t]) {
          if (state.groups[y] == to) {
            state.centers[t] = y;
            swapped = true;
            break;
          }
        }
      }
      if (!swapped) throw std::logic_error("swap graph edge without a witnessing cluster");
      ++result.swap_count;
    }
    --state.counts[path.front()];
    ++state.counts[path.back()];
    ++result.chain_count;
    graph = build_swap_graph(state.centers, state.clusters, state.groups, m);
  }

  if (state.counts != state.quotas) {
    std::vector<std::size_t> surplus;
    for (std::size_t g = 0; g < m; ++g)
      if (state.counts[g] > state.quotas[g]) surplus.push_back(g);
    const auto in_g = graph.reachable_from(surplus);
    for (std::size_t g = 0; g < m; ++g)
      if (in_g[g]) result.g_set.push_back(g);
  }
  result.centers = std::move(state.centers);
  result.counts = std::move(state.counts);
  result.final_graph = std::move(graph);
  return result;
}

/// Clusters whose (final) center lies in a g_set group contain only g_set members.
inline bool satisfies_closure_property(const PartitionResult& result,
                                       const std::vector<std::vector<Index>>& clusters,
                                       std::span<const std::size_t> groups, std::size_t m) {
  std::vector<char> in_g(m, 0);
  for (std::size_t g : result.g_set) in_g[g] = 1;
  for (std::size_t t = 0; t < result.centers.size(); ++t) {
    if (!in_g[groups[result.centers[t]]]) continue;
    for (Index y : clusters[t])
      if (!in_g[groups[y]]) return false;
  }
  return true;
}

/// Groups outside g_set hold at most their quota of centers.
inline bool satisfies_quota_property(const PartitionResult& result, std::span<const std::size_t> groups,
                                     std::span<const std::size_t> quotas) {
  const auto counts = group_counts(groups, result.centers, quotas.size());
  std::vector<char> in_g(quotas.size(), 0);
  for (std::size_t g : result.g_set) in_g[g] = 1;
  for (std::size_t g = 0; g < quotas.size(); ++g)
    if (!in_g[g] && counts[g] > quotas[g]) return false;
  return true;
}

}  // namespace fairkc
