#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fairkc/core.hpp"

namespace fairkc {

struct OracleResult {
  double opt_value = 0.0;
  CenterSet witness;
  std::uint64_t enumerated = 0;
};

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

/// Binomial coefficient, saturating at `cap + 1` so budget checks never overflow.
inline std::uint64_t capped_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double value = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) {
    value = value * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (value > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(value + 0.5L);
}

namespace detail {

/// Depth-first enumeration of one combination per slot list. Each slot list
/// is (candidates, count); a full selection takes `count` ascending entries
/// from every list. Nearest-center distances are maintained incrementally per
/// depth, and leaf evaluation stops once it reaches the incumbent.
class Enumerator {
 public:
  Enumerator(const DistanceMatrix& d, std::span<const Index> fixed) : d_(d), n_(d.size()) {
    base_.assign(n_, kInfinity);
    for (Index c : fixed)
      for (Index p = 0; p < n_; ++p) base_[p] = std::min(base_[p], d_(c, p));
  }

  void add_slot(std::vector<Index> candidates, std::size_t count) {
    if (count == 0) return;
    slots_.push_back({std::move(candidates), count});
  }

  OracleResult run() {
    std::size_t total = 0;
    for (const auto& s : slots_) total += s.count;
    levels_.assign(total + 1, std::vector<double>(n_));
    levels_[0] = base_;
    chosen_.clear();
    best_ = kInfinity;
    if (total == 0) {
      best_ = 0.0;
      for (double v : base_) best_ = std::max(best_, v);
      ++enumerated_;
    } else {
      descend(0, 0, 0);
    }
    return {best_, witness_, enumerated_};
  }

 private:
  struct Slot {
    std::vector<Index> candidates;
    std::size_t count;
  };

  void descend(std::size_t slot, std::size_t start, std::size_t taken) {
    if (slot == slots_.size()) {
      ++enumerated_;
      const auto& nearest = levels_[chosen_.size()];
      double worst = 0.0;
      for (double v : nearest) {
        if (v > worst) {
          worst = v;
          if (worst >= best_) return;
        }
      }
      best_ = worst;
      witness_ = chosen_;
      return;
    }
    const Slot& s = slots_[slot];
    if (taken == s.count) {
      descend(slot + 1, 0, 0);
      return;
    }
    const std::size_t remaining = s.count - taken;
    for (std::size_t i = start; i + remaining <= s.candidates.size(); ++i) {
      const Index c = s.candidates[i];
      const auto& prev = levels_[chosen_.size()];
      auto& next = levels_[chosen_.size() + 1];
      const auto row = d_.row(c);
      for (Index p = 0; p < n_; ++p) next[p] = std::min(prev[p], row[p]);
      chosen_.push_back(c);
      descend(slot, i + 1, taken + 1);
      chosen_.pop_back();
    }
  }

  const DistanceMatrix& d_;
  std::size_t n_;
  std::vector<double> base_;
  std::vector<Slot> slots_;
  std::vector<std::vector<double>> levels_;
  CenterSet chosen_;
  CenterSet witness_;
  double best_ = kInfinity;
  std::uint64_t enumerated_ = 0;
};

inline std::vector<char> fixed_mask(const Instance& instance) {
  std::vector<char> fixed(instance.n(), 0);
  for (Index c : instance.c0) fixed[c] = 1;
  return fixed;
}

}  // namespace detail

/// Exact optimum of unconstrained k-center with the instance's c0 fixed,
/// over all k-subsets of the non-fixed points.
inline OracleResult brute_force_unfair(const Instance& instance, std::size_t k,
                                       std::uint64_t budget = kDefaultOracleBudget) {
  const auto fixed = detail::fixed_mask(instance);
  std::vector<Index> candidates;
  for (Index i = 0; i < instance.n(); ++i)
    if (!fixed[i]) candidates.push_back(i);
  if (k > candidates.size()) {
    throw Error(ErrorCode::NotEnoughPoints, "k exceeds the number of non-fixed points");
  }
  if (k == 0 && instance.c0.empty()) throw Error(ErrorCode::EmptyCenterSet, "k = 0 and no fixed centers");
  const auto count = capped_binomial(candidates.size(), k, budget);
  if (count > budget) {
    throw Error(ErrorCode::BudgetExceeded, "C(" + std::to_string(candidates.size()) + ", " + std::to_string(k) +
                                               ") candidate sets exceed the budget of " + std::to_string(budget));
  }
  const DistanceMatrix d = instance.metric.materialize();
  detail::Enumerator search(d, instance.c0);
  search.add_slot(std::move(candidates), k);
  return search.run();
}

/// Exact optimum of the fair problem: every quota met exactly, c0 fixed.
inline OracleResult brute_force_fair(const Instance& instance, std::uint64_t budget = kDefaultOracleBudget) {
  require_valid(instance);
  if (instance.k() == 0 && instance.c0.empty()) throw Error(ErrorCode::EmptyCenterSet, "k = 0 and no fixed centers");
  const auto fixed = detail::fixed_mask(instance);
  const std::size_t m = instance.group_count();
  std::vector<std::vector<Index>> members(m);
  for (Index i = 0; i < instance.n(); ++i)
    if (!fixed[i]) members[instance.groups[i]].push_back(i);

  std::uint64_t product = 1;
  for (std::size_t g = 0; g < m; ++g) {
    const auto count = capped_binomial(members[g].size(), instance.quotas[g], budget);
    if (count > budget || product > budget / std::max<std::uint64_t>(count, 1)) {
      throw Error(ErrorCode::BudgetExceeded,
                  "quota-respecting candidate sets exceed the budget of " + std::to_string(budget));
    }
    product *= count;
  }

  const DistanceMatrix d = instance.metric.materialize();
  detail::Enumerator search(d, instance.c0);
  for (std::size_t g = 0; g < m; ++g) search.add_slot(std::move(members[g]), instance.quotas[g]);
  return search.run();
}

/// cost / opt_value, with 0/0 reported as 1.
inline double approx_factor(double cost, double opt_value) {
  if (opt_value == 0.0) {
    if (cost == 0.0) return 1.0;
    throw Error(ErrorCode::ZeroOptimumPositiveCost, "optimum is 0 but the solution costs " + std::to_string(cost));
  }
  return cost / opt_value;
}

}  // namespace fairkc
