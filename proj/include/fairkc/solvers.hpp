#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "fairkc/core.hpp"
#include "fairkc/exchange.hpp"
#include "fairkc/greedy.hpp"

namespace fairkc {

struct FairSolveConfig {
  SelectionMode mode = SelectionMode::Deterministic;
  std::uint64_t seed = 0;
  bool record_trace = false;

  Chooser chooser() const { return Chooser(mode, seed); }
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline SolveReport finish(const Instance& instance, CenterSet centers, double wall_time) {
  SolveReport report;
  report.wall_time = wall_time;
  report.cost = centers.empty() && instance.c0.empty() ? 0.0 : clustering_cost(instance, centers);
  report.centers = std::move(centers);
  return report;
}

/// Members of `group` among `points` that are neither fixed nor already used.
inline std::vector<Index> unused_members(std::span<const Index> points, std::span<const std::size_t> labels,
                                         std::size_t group, std::span<const Index> fixed,
                                         std::span<const Index> used) {
  std::vector<Index> pool;
  for (Index p : points) {
    if (labels[p] != group) continue;
    if (std::find(fixed.begin(), fixed.end(), p) != fixed.end()) continue;
    if (std::find(used.begin(), used.end(), p) != used.end()) continue;
    pool.push_back(p);
  }
  return pool;
}

struct Subproblem {
  std::vector<Index> points;          // ascending point ids
  std::vector<std::size_t> labels;    // indexed by point id, meaningful on `points`
  std::vector<std::size_t> quotas;
  std::vector<Index> fixed;
};

struct RecursionStats {
  std::size_t swaps = 0;
  std::size_t depth = 0;
};

inline CenterSet fair_recursive(const Metric& metric, const Subproblem& sub, Chooser& chooser,
                                RecursionStats& stats) {
  ++stats.depth;
  const std::size_t m = sub.quotas.size();
  std::size_t k = 0;
  for (std::size_t q : sub.quotas) k += q;

  CenterSet chosen = greedy_k_center(metric, sub.points, k, sub.fixed, chooser).chosen;
  if (m == 1) return chosen;

  CenterSet ordered = chosen;
  ordered.insert(ordered.end(), sub.fixed.begin(), sub.fixed.end());
  Clustering clustering = assign_clusters(metric, sub.points, ordered);
  clustering.members.resize(k);  // drop the clusters of fixed centers

  auto partition = exchange_and_partition(
      make_exchange_state(std::move(chosen), clustering.members, sub.labels, sub.quotas));
  stats.swaps += partition.swap_count;
  if (partition.g_set.empty()) return partition.centers;

  std::vector<char> in_g(m, 0);
  for (std::size_t g : partition.g_set) in_g[g] = 1;

  Subproblem next;
  CenterSet resolved;  // C': final centers from groups outside G
  for (std::size_t t = 0; t < k; ++t) {
    const Index c = partition.centers[t];
    if (in_g[sub.labels[c]]) {
      next.points.insert(next.points.end(), clustering.members[t].begin(), clustering.members[t].end());
    } else {
      resolved.push_back(c);
    }
  }
  next.fixed = resolved;
  next.fixed.insert(next.fixed.end(), sub.fixed.begin(), sub.fixed.end());
  next.points.insert(next.points.end(), next.fixed.begin(), next.fixed.end());
  std::sort(next.points.begin(), next.points.end());
  next.points.erase(std::unique(next.points.begin(), next.points.end()), next.points.end());

  std::vector<std::size_t> relabel(m, 0);
  for (std::size_t i = 0; i < partition.g_set.size(); ++i) {
    relabel[partition.g_set[i]] = i;
    next.quotas.push_back(sub.quotas[partition.g_set[i]]);
  }
  next.labels = sub.labels;
  for (Index p : next.points) next.labels[p] = relabel[sub.labels[p]];
  // Fixed points join the lowest-id group of G; as fixed centers they never count toward its quota.
  for (Index f : next.fixed) next.labels[f] = 0;

  CenterSet result = fair_recursive(metric, next, chooser, stats);
  result.insert(result.end(), resolved.begin(), resolved.end());
  const auto counts = group_counts(sub.labels, resolved, m);
  for (std::size_t g = 0; g < m; ++g) {
    if (in_g[g]) continue;
    auto pool = unused_members(sub.points, sub.labels, g, sub.fixed, result);
    const auto fill = chooser.pick(std::move(pool), sub.quotas[g] - counts[g]);
    result.insert(result.end(), fill.begin(), fill.end());
  }
  return result;
}

}  // namespace detail

/// Unconstrained greedy with k = sum of quotas; ignores group labels.
inline SolveReport unfair_greedy(const Instance& instance, const FairSolveConfig& config) {
  detail::Stopwatch clock;
  Chooser chooser = config.chooser();
  auto trace = greedy_k_center(instance, instance.k(), chooser);
  const double elapsed = clock.seconds();
  auto report = detail::finish(instance, std::move(trace.chosen), elapsed);
  report.recursion_depth = 1;
  return report;
}

/// Fair k-center for two groups: greedy, swap surplus centers for
/// other-group members of their clusters, then re-run greedy inside the
/// clusters that are still held by the surplus group. 5-approximation.
inline SolveReport fair_two_groups(const Instance& instance, const FairSolveConfig& config) {
  if (instance.group_count() != 2) {
    throw Error(ErrorCode::WrongGroupCount,
                "two-group solver needs m = 2, got m = " + std::to_string(instance.group_count()));
  }
  require_valid(instance);
  detail::Stopwatch clock;
  Chooser chooser = config.chooser();
  const auto& groups = instance.groups;
  const auto& quotas = instance.quotas;
  const std::size_t k = instance.k();

  CenterSet centers = greedy_k_center(instance, k, chooser).chosen;
  auto counts = group_counts(groups, centers, 2);
  SolveReport report;
  report.recursion_depth = 1;
  if (counts[0] == quotas[0]) {
    const double elapsed = clock.seconds();
    report = detail::finish(instance, std::move(centers), elapsed);
    report.recursion_depth = 1;
    return report;
  }

  const std::size_t surplus = counts[0] > quotas[0] ? 0 : 1;
  const std::size_t other = 1 - surplus;
  const Clustering clustering = assign_clusters(instance, centers);

  std::size_t swaps = 0;
  while (counts[surplus] > quotas[surplus]) {
    bool swapped = false;
    for (std::size_t t = 0; t < k && !swapped; ++t) {
      if (groups[centers[t]] != surplus) continue;
      for (Index y : clustering.members[t]) {
        if (groups[y] == other) {
          centers[t] = y;
          swapped = true;
          break;
        }
      }
    }
    if (!swapped) break;
    --counts[surplus];
    ++counts[other];
    ++swaps;
  }

  if (counts[surplus] != quotas[surplus]) {
    // Clusters still centered in the surplus group contain only that group.
    std::vector<Index> region;
    CenterSet kept;  // centers already in the other group
    for (std::size_t t = 0; t < k; ++t) {
      if (groups[centers[t]] == surplus) {
        region.insert(region.end(), clustering.members[t].begin(), clustering.members[t].end());
      } else {
        kept.push_back(centers[t]);
      }
    }
    std::vector<Index> fixed = instance.c0;
    fixed.insert(fixed.end(), kept.begin(), kept.end());
    region.insert(region.end(), fixed.begin(), fixed.end());
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());

    CenterSet result = greedy_k_center(instance.metric, region, quotas[surplus], fixed, chooser).chosen;
    result.insert(result.end(), kept.begin(), kept.end());
    const auto all = iota_points(instance.n());
    auto pool = detail::unused_members(all, groups, other, instance.c0, result);
    const auto fill = chooser.pick(std::move(pool), quotas[other] - kept.size());
    result.insert(result.end(), fill.begin(), fill.end());
    centers = std::move(result);
    report.recursion_depth = 2;
  }

  const double elapsed = clock.seconds();
  const std::size_t depth = report.recursion_depth;
  report = detail::finish(instance, std::move(centers), elapsed);
  report.swaps_performed = swaps;
  report.recursion_depth = depth;
  return report;
}

/// Fair k-center for any number of groups: greedy, exchange along swap-graph
/// chains, then recurse on the residual groups with the resolved centers
/// fixed. (3 * 2^(m-1) - 1)-approximation; recursion depth at most m.
inline SolveReport fair_m_groups(const Instance& instance, const FairSolveConfig& config) {
  require_valid(instance);
  detail::Stopwatch clock;
  Chooser chooser = config.chooser();
  detail::Subproblem top;
  top.points = iota_points(instance.n());
  top.labels = instance.groups;
  top.quotas = instance.quotas;
  top.fixed = instance.c0;
  detail::RecursionStats stats;
  CenterSet centers = detail::fair_recursive(instance.metric, top, chooser, stats);
  const double elapsed = clock.seconds();
  auto report = detail::finish(instance, std::move(centers), elapsed);
  report.swaps_performed = stats.swaps;
  report.recursion_depth = stats.depth;
  return report;
}

/// Baseline: greedy run separately inside every group.
inline SolveReport heuristic_a(const Instance& instance, const FairSolveConfig& config) {
  require_valid(instance);
  detail::Stopwatch clock;
  Chooser chooser = config.chooser();
  const std::size_t m = instance.group_count();
  std::vector<std::vector<Index>> members(m);
  for (Index i = 0; i < instance.n(); ++i) members[instance.groups[i]].push_back(i);
  CenterSet centers;
  for (std::size_t g = 0; g < m; ++g) {
    std::vector<Index> fixed;
    for (Index c : instance.c0)
      if (instance.groups[c] == g) fixed.push_back(c);
    auto picked = greedy_k_center(instance.metric, members[g], instance.quotas[g], fixed, chooser).chosen;
    centers.insert(centers.end(), picked.begin(), picked.end());
  }
  const double elapsed = clock.seconds();
  auto report = detail::finish(instance, std::move(centers), elapsed);
  report.recursion_depth = 1;
  return report;
}

/// Baseline: greedy whose argmax only ranges over groups with unfilled quota.
inline SolveReport heuristic_b(const Instance& instance, const FairSolveConfig& config) {
  require_valid(instance);
  detail::Stopwatch clock;
  Chooser chooser = config.chooser();
  const std::size_t n = instance.n();
  const auto points = iota_points(n);
  std::vector<double> nearest = nearest_distances(instance.metric, points, instance.c0);
  std::vector<char> taken(n, 0);
  for (Index c : instance.c0) taken[c] = 1;
  auto remaining = instance.quotas;

  CenterSet centers;
  const std::size_t k = instance.k();
  for (std::size_t i = 0; i < k; ++i) {
    double best = -1.0;
    Index choice = 0;
    std::size_t ties = 0;
    for (Index p = 0; p < n; ++p) {
      if (taken[p] || remaining[instance.groups[p]] == 0) continue;
      const double d = nearest[p];
      if (d > best) {
        best = d;
        choice = p;
        ties = 1;
      } else if (d == best) {
        ++ties;
        if (chooser.randomized() && chooser.below(ties) == 0) choice = p;
      }
    }
    taken[choice] = 1;
    --remaining[instance.groups[choice]];
    centers.push_back(choice);
    instance.metric.scan(choice, points, [&](std::size_t p, double d) {
      if (d < nearest[p]) nearest[p] = d;
    });
  }
  const double elapsed = clock.seconds();
  auto report = detail::finish(instance, std::move(centers), elapsed);
  report.recursion_depth = 1;
  return report;
}

}  // namespace fairkc
