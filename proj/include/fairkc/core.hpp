#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairkc/error.hpp"
#include "fairkc/metrics.hpp"

namespace fairkc {

/// Ordered selection of point indices; selection order is preserved.
using CenterSet = std::vector<Index>;

/// A fair k-center instance: metric, one group label per point, per-group
/// quotas, and the centers given up front (c0). The group count m is
/// quotas.size().
struct Instance {
  Metric metric;
  std::vector<std::size_t> groups;
  std::vector<std::size_t> quotas;
  CenterSet c0;

  std::size_t n() const noexcept { return metric.size(); }
  std::size_t group_count() const noexcept { return quotas.size(); }
  std::size_t k() const noexcept { return std::accumulate(quotas.begin(), quotas.end(), std::size_t{0}); }
};

struct Clustering {
  /// Ordered centers: the chosen centers first, then fixed ones.
  CenterSet centers;
  /// owner[p] is the position in `centers` that point p (by position in the clustered point list) belongs to.
  std::vector<std::size_t> owner;
  /// members[t] lists the point indices assigned to centers[t], in ascending point order.
  std::vector<std::vector<Index>> members;
};

struct SolveReport {
  CenterSet centers;
  double cost = 0.0;
  double wall_time = 0.0;
  std::size_t swaps_performed = 0;
  std::size_t recursion_depth = 0;
};

inline std::vector<Index> iota_points(std::size_t n) {
  std::vector<Index> points(n);
  std::iota(points.begin(), points.end(), Index{0});
  return points;
}

/// Number of entries of `centers` in each group.
inline std::vector<std::size_t> group_counts(std::span<const std::size_t> groups, std::span<const Index> centers,
                                             std::size_t m) {
  std::vector<std::size_t> counts(m, 0);
  for (Index c : centers) ++counts[groups[c]];
  return counts;
}

/// Checks every Instance invariant. Returns the first violation, or nothing when the instance is valid.
inline std::optional<Error> validate(const Instance& instance) {
  const std::size_t n = instance.n();
  const std::size_t m = instance.group_count();
  if (instance.groups.size() != n) {
    return Error(ErrorCode::BadGroupId, "expected " + std::to_string(n) + " group labels, got " +
                                            std::to_string(instance.groups.size()));
  }
  for (Index i = 0; i < n; ++i) {
    if (instance.groups[i] >= m) {
      return Error(ErrorCode::BadGroupId, "point " + std::to_string(i) + " has group " +
                                              std::to_string(instance.groups[i]) + " but m = " + std::to_string(m));
    }
  }
  std::vector<char> fixed(n, 0);
  for (Index c : instance.c0) {
    if (c >= n) return Error(ErrorCode::IndexOutOfRange, "c0 entry " + std::to_string(c) + " out of range");
    if (fixed[c]) return Error(ErrorCode::DuplicateC0, "c0 lists point " + std::to_string(c) + " twice");
    fixed[c] = 1;
  }
  std::vector<std::size_t> available(m, 0);
  for (Index i = 0; i < n; ++i)
    if (!fixed[i]) ++available[instance.groups[i]];
  for (std::size_t g = 0; g < m; ++g) {
    if (instance.quotas[g] > available[g]) {
      return Error(ErrorCode::InfeasibleQuota, "group " + std::to_string(g) + " needs " +
                                                   std::to_string(instance.quotas[g]) + " centers but has " +
                                                   std::to_string(available[g]) + " non-fixed members");
    }
  }
  return std::nullopt;
}

inline void require_valid(const Instance& instance) {
  if (auto err = validate(instance)) throw *err;
}

/// For each point of `points`, the distance to its nearest center in `centers`.
inline std::vector<double> nearest_distances(const Metric& metric, std::span<const Index> points,
                                             std::span<const Index> centers) {
  std::vector<double> nearest(points.size(), kInfinity);
  for (Index c : centers) {
    metric.scan(c, points, [&](std::size_t p, double d) {
      if (d < nearest[p]) nearest[p] = d;
    });
  }
  return nearest;
}

/// max over `points` of the distance to the closest of centers and fixed.
inline double cover_radius(const Metric& metric, std::span<const Index> points, std::span<const Index> centers,
                           std::span<const Index> fixed = {}) {
  if (centers.empty() && fixed.empty()) throw Error(ErrorCode::EmptyCenterSet, "no centers to evaluate");
  std::vector<double> nearest = nearest_distances(metric, points, centers);
  for (Index c : fixed) {
    metric.scan(c, points, [&](std::size_t p, double d) {
      if (d < nearest[p]) nearest[p] = d;
    });
  }
  double worst = 0.0;
  for (double d : nearest) worst = std::max(worst, d);
  return worst;
}

/// Cost of serving every point of the instance by centers plus extra_fixed.
inline double clustering_cost(const Instance& instance, std::span<const Index> centers,
                              std::span<const Index> extra_fixed) {
  const auto points = iota_points(instance.n());
  return cover_radius(instance.metric, points, centers, extra_fixed);
}

/// Cost with the instance's own c0 as the fixed centers.
inline double clustering_cost(const Instance& instance, std::span<const Index> centers) {
  return clustering_cost(instance, centers, instance.c0);
}

/// Assigns each point of `points` to its closest entry of `ordered_centers`.
/// Distance ties go to the earliest position; a point that is itself a
/// center always stays with itself.
inline Clustering assign_clusters(const Metric& metric, std::span<const Index> points,
                                  std::span<const Index> ordered_centers) {
  if (ordered_centers.empty()) throw Error(ErrorCode::EmptyCenterSet, "cannot cluster without centers");
  Clustering result;
  result.centers.assign(ordered_centers.begin(), ordered_centers.end());
  std::vector<double> best(points.size(), kInfinity);
  result.owner.assign(points.size(), 0);
  for (std::size_t t = 0; t < ordered_centers.size(); ++t) {
    metric.scan(ordered_centers[t], points, [&](std::size_t p, double d) {
      if (d < best[p]) {
        best[p] = d;
        result.owner[p] = t;
      }
    });
  }
  std::unordered_map<Index, std::size_t> position;
  for (std::size_t t = ordered_centers.size(); t-- > 0;) position[ordered_centers[t]] = t;
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (best[p] != 0.0) continue;
    if (auto it = position.find(points[p]); it != position.end()) result.owner[p] = it->second;
  }
  result.members.assign(ordered_centers.size(), {});
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  for (std::size_t p : order) result.members[result.owner[p]].push_back(points[p]);
  return result;
}

/// Clusters all points of the instance around centers followed by c0.
inline Clustering assign_clusters(const Instance& instance, std::span<const Index> centers) {
  std::vector<Index> ordered(centers.begin(), centers.end());
  ordered.insert(ordered.end(), instance.c0.begin(), instance.c0.end());
  const auto points = iota_points(instance.n());
  return assign_clusters(instance.metric, points, ordered);
}

}  // namespace fairkc
