#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "fairkc/error.hpp"

namespace fairkc {

using Index = std::size_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense n x n distance table, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  DistanceMatrix(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != n_ * n_) {
      throw Error(ErrorCode::BadParameters, "distance matrix needs n*n = " + std::to_string(n_ * n_) +
                                                " values, got " + std::to_string(values_.size()));
    }
  }

  std::size_t size() const noexcept { return n_; }

  double operator()(Index i, Index j) const noexcept { return values_[i * n_ + j]; }

  std::span<const double> row(Index i) const noexcept { return {values_.data() + i * n_, n_}; }

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

enum class Norm { L1, L2 };

/// Points in R^dim under the l1 or l2 norm.
class PointSet {
 public:
  PointSet() = default;

  PointSet(std::size_t dim, std::vector<double> coords, Norm norm)
      : dim_(dim), coords_(std::move(coords)), norm_(norm) {
    if (dim_ == 0 || coords_.size() % dim_ != 0) {
      throw Error(ErrorCode::BadParameters, "coordinate count is not a multiple of the dimension");
    }
  }

  static PointSet from_rows(const std::vector<std::vector<double>>& rows, Norm norm) {
    if (rows.empty()) return PointSet(1, {}, norm);
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& r : rows) {
      if (r.size() != dim) throw Error(ErrorCode::BadParameters, "all rows must have the same dimension");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointSet(dim, std::move(flat), norm);
  }

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  Norm norm() const noexcept { return norm_; }
  std::span<const double> point(Index i) const noexcept { return {coords_.data() + i * dim_, dim_}; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  double operator()(Index i, Index j) const noexcept {
    const double* a = coords_.data() + i * dim_;
    const double* b = coords_.data() + j * dim_;
    double acc = 0.0;
    if (norm_ == Norm::L1) {
      for (std::size_t t = 0; t < dim_; ++t) acc += std::abs(a[t] - b[t]);
      return acc;
    }
    for (std::size_t t = 0; t < dim_; ++t) {
      const double diff = a[t] - b[t];
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }

 private:
  std::size_t dim_ = 1;
  std::vector<double> coords_;
  Norm norm_ = Norm::L2;
};

struct Edge {
  Index u;
  Index v;
  double weight;
};

/// Undirected graph with positive edge weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adjacency_(n) {
    for (const auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw Error(ErrorCode::IndexOutOfRange, "edge endpoint out of range");
      if (!(e.weight > 0.0)) throw Error(ErrorCode::BadParameters, "edge weights must be positive");
      adjacency_[e.u].push_back({e.v, e.weight});
      adjacency_[e.v].push_back({e.u, e.weight});
    }
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::vector<Index> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adjacency_[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    return reached == n_;
  }

  /// Dijkstra from one source; unreachable vertices stay at infinity.
  std::vector<double> single_source(Index source) const {
    std::vector<double> dist(n_, kInfinity);
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u]) continue;
      for (const auto& [v, w] : adjacency_[u]) {
        const double nd = d + w;
        if (nd < dist[v]) {
          dist[v] = nd;
          queue.push({nd, v});
        }
      }
    }
    return dist;
  }

 private:
  struct Arc {
    Index to;
    double weight;
  };

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
};

/// All-pairs shortest paths by one Dijkstra run per vertex.
inline DistanceMatrix shortest_path_matrix(const WeightedGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> values(n * n);
  for (Index s = 0; s < n; ++s) {
    const auto row = graph.single_source(s);
    for (Index t = 0; t < n; ++t) {
      if (row[t] == kInfinity) throw Error(ErrorCode::DisconnectedGraph, "graph is not connected");
      values[s * n + t] = row[t];
    }
  }
  // Dijkstra sums along different paths can disagree in the last ulp; keep the table symmetric.
  for (Index s = 0; s < n; ++s) {
    for (Index t = s + 1; t < n; ++t) {
      const double d = std::min(values[s * n + t], values[t * n + s]);
      values[s * n + t] = d;
      values[t * n + s] = d;
    }
  }
  return DistanceMatrix(n, std::move(values));
}

/// Shortest-path metric whose rows are computed on first use and cached.
/// Used when the dense table would not fit in memory.
class GraphDistances {
 public:
  explicit GraphDistances(WeightedGraph graph) : graph_(std::move(graph)) {
    if (!graph_.connected()) throw Error(ErrorCode::DisconnectedGraph, "graph is not connected");
  }

  GraphDistances(const GraphDistances&) = delete;
  GraphDistances& operator=(const GraphDistances&) = delete;

  std::size_t size() const noexcept { return graph_.size(); }
  const WeightedGraph& graph() const noexcept { return graph_; }

  std::shared_ptr<const std::vector<double>> row(Index source) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = rows_.find(source); it != rows_.end()) return it->second;
    }
    auto computed = std::make_shared<const std::vector<double>>(graph_.single_source(source));
    std::lock_guard lock(mutex_);
    return rows_.emplace(source, std::move(computed)).first->second;
  }

  double operator()(Index i, Index j) const {
    // The row of the smaller index is used for both (i, j) and (j, i) so the metric stays symmetric.
    if (i > j) std::swap(i, j);
    return (*row(i))[j];
  }

  std::size_t cached_rows() const {
    std::lock_guard lock(mutex_);
    return rows_.size();
  }

 private:
  WeightedGraph graph_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Index, std::shared_ptr<const std::vector<double>>> rows_;
};

enum class MetricKind { Matrix, Points, Graph };

/// Type-erased metric over points 0..n-1. Cheap to copy; the graph backend is shared.
class Metric {
 public:
  Metric() = default;
  explicit Metric(DistanceMatrix m) : backend_(std::move(m)) {}
  explicit Metric(PointSet p) : backend_(std::move(p)) {}
  explicit Metric(WeightedGraph g) : backend_(std::make_shared<const GraphDistances>(std::move(g))) {}

  MetricKind kind() const noexcept { return static_cast<MetricKind>(backend_.index()); }

  std::size_t size() const noexcept {
    return std::visit([](const auto& b) { return size_of(b); }, backend_);
  }

  /// Bounds-checked distance.
  double dist(Index i, Index j) const {
    if (i >= size() || j >= size()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "distance query (" + std::to_string(i) + ", " + std::to_string(j) + ") with n = " +
                      std::to_string(size()));
    }
    return (*this)(i, j);
  }

  double operator()(Index i, Index j) const {
    if (i == j) return 0.0;
    return std::visit(
        [&](const auto& b) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(b)>, std::shared_ptr<const GraphDistances>>) {
            return (*b)(i, j);
          } else {
            return b(i, j);
          }
        },
        backend_);
  }

  /// Calls fn(position, distance) for every target, with distance = d(source, targets[position]).
  template <typename Fn>
  void scan(Index source, std::span<const Index> targets, Fn&& fn) const {
    std::visit(
        [&](const auto& b) {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, DistanceMatrix>) {
            const auto row = b.row(source);
            for (std::size_t p = 0; p < targets.size(); ++p) fn(p, row[targets[p]]);
          } else if constexpr (std::is_same_v<B, PointSet>) {
            for (std::size_t p = 0; p < targets.size(); ++p) fn(p, b(source, targets[p]));
          } else {
            const auto row = b->row(source);
            for (std::size_t p = 0; p < targets.size(); ++p) fn(p, (*row)[targets[p]]);
          }
        },
        backend_);
  }

  /// Dense copy of the whole metric.
  DistanceMatrix materialize() const {
    return std::visit(
        [](const auto& b) -> DistanceMatrix {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, DistanceMatrix>) {
            return b;
          } else if constexpr (std::is_same_v<B, PointSet>) {
            const std::size_t n = b.size();
            std::vector<double> values(n * n, 0.0);
            for (Index i = 0; i < n; ++i)
              for (Index j = 0; j < n; ++j) values[i * n + j] = i == j ? 0.0 : b(i, j);
            return DistanceMatrix(n, std::move(values));
          } else {
            return shortest_path_matrix(b->graph());
          }
        },
        backend_);
  }

  const DistanceMatrix* matrix() const noexcept { return std::get_if<DistanceMatrix>(&backend_); }
  const PointSet* points() const noexcept { return std::get_if<PointSet>(&backend_); }
  const GraphDistances* graph() const noexcept {
    const auto* g = std::get_if<std::shared_ptr<const GraphDistances>>(&backend_);
    return g ? g->get() : nullptr;
  }

 private:
  static std::size_t size_of(const DistanceMatrix& m) noexcept { return m.size(); }
  static std::size_t size_of(const PointSet& p) noexcept { return p.size(); }
  static std::size_t size_of(const std::shared_ptr<const GraphDistances>& g) noexcept { return g->size(); }

  std::variant<DistanceMatrix, PointSet, std::shared_ptr<const GraphDistances>> backend_;
};

}  // namespace fairkc
