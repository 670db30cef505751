#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fairkc/core.hpp"

namespace fairkc {

enum class SelectionMode { Deterministic, SeededRandom };

/// Resolves the choices the algorithms leave open (argmax ties, the first
/// pick, "arbitrary" quota fill). Deterministic mode always takes the lowest
/// point index; seeded mode draws uniformly from a 64-bit Mersenne Twister.
class Chooser {
 public:
  static Chooser deterministic() { return Chooser(SelectionMode::Deterministic, 0); }
  static Chooser seeded(std::uint64_t seed) { return Chooser(SelectionMode::SeededRandom, seed); }

  Chooser(SelectionMode mode, std::uint64_t seed) : mode_(mode), engine_(seed) {}

  SelectionMode mode() const noexcept { return mode_; }
  bool randomized() const noexcept { return mode_ == SelectionMode::SeededRandom; }

  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_);
  }

  /// Picks `count` entries of `pool`: the `count` smallest in deterministic
  /// mode, a uniform sample otherwise. Result is sorted ascending.
  std::vector<Index> pick(std::vector<Index> pool, std::size_t count) {
    std::sort(pool.begin(), pool.end());
    if (count > pool.size()) throw Error(ErrorCode::NotEnoughPoints, "not enough elements to pick from");
    if (randomized()) {
      // Partial Fisher-Yates.
      for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + below(pool.size() - i)]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  SelectionMode mode_;
  std::mt19937_64 engine_;
};

struct GreedyTrace {
  CenterSet chosen;
  /// radii[i] is d(chosen[i], previously chosen + fixed); infinity when nothing was chosen or fixed yet.
  std::vector<double> radii;
};

/// Farthest-point greedy over `points` with `fixed` as already-open centers.
/// Returns k distinct centers from points \ fixed. Every pick maximizes the
/// distance to the current centers, so the cover radius over `points` is at
/// most twice the optimum of the same problem. O((k + |fixed|) |points|)
/// distance evaluations.
inline GreedyTrace greedy_k_center(const Metric& metric, std::span<const Index> points, std::size_t k,
                                   std::span<const Index> fixed, Chooser& chooser) {
  std::vector<char> is_fixed(metric.size(), 0);
  for (Index f : fixed) is_fixed[f] = 1;

  std::vector<double> nearest = nearest_distances(metric, points, fixed);
  std::vector<char> taken(points.size(), 0);
  std::size_t available = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    taken[p] = is_fixed[points[p]];
    if (!taken[p]) ++available;
  }
  if (k > available) {
    throw Error(ErrorCode::NotEnoughPoints, "asked for " + std::to_string(k) + " centers but only " +
                                                std::to_string(available) + " candidates exist");
  }

  GreedyTrace trace;
  trace.chosen.reserve(k);
  trace.radii.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    double best = -1.0;
    std::size_t choice = 0;
    std::size_t ties = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (taken[p]) continue;
      const double d = nearest[p];
      if (d > best) {
        best = d;
        choice = p;
        ties = 1;
      } else if (d == best) {
        ++ties;
        if (chooser.randomized()) {
          if (chooser.below(ties) == 0) choice = p;
        } else if (points[p] < points[choice]) {
          choice = p;
        }
      }
    }
    taken[choice] = 1;
    trace.chosen.push_back(points[choice]);
    trace.radii.push_back(best);
    metric.scan(points[choice], points, [&](std::size_t p, double d) {
      if (d < nearest[p]) nearest[p] = d;
    });
  }
  return trace;
}

/// Greedy over the whole instance with its c0 as the initially given centers.
inline GreedyTrace greedy_k_center(const Instance& instance, std::size_t k, Chooser& chooser) {
  const auto points = iota_points(instance.n());
  return greedy_k_center(instance.metric, points, k, instance.c0, chooser);
}

/// Relative slack for floating-point bound checks.
inline constexpr double kBoundTolerance = 1e-9;

inline bool within_factor(double cost, double factor, double opt_value) {
  return cost <= factor * opt_value + kBoundTolerance * std::max(1.0, factor * opt_value);
}

/// True iff the greedy solution (plus c0) costs at most twice opt_value.
inline bool two_approx_check(const Instance& instance, const GreedyTrace& trace, double opt_value) {
  return within_factor(clustering_cost(instance, trace.chosen), 2.0, opt_value);
}

}  // namespace fairkc
