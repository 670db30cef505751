#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fairkc/core.hpp"

namespace fairkc {

namespace detail {

/// Uniform random subset of {0..n-1} of the given size, ascending.
inline std::vector<Index> random_subset(std::size_t n, std::size_t size, std::mt19937_64& rng) {
  std::vector<Index> pool = iota_points(n);
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline bool quotas_feasible(std::span<const std::size_t> groups, std::span<const std::size_t> quotas,
                            std::span<const Index> c0) {
  std::vector<std::size_t> available(quotas.size(), 0);
  std::vector<char> fixed(groups.size(), 0);
  for (Index c : c0) fixed[c] = 1;
  for (Index i = 0; i < groups.size(); ++i)
    if (!fixed[i]) ++available[groups[i]];
  for (std::size_t g = 0; g < quotas.size(); ++g)
    if (quotas[g] > available[g]) return false;
  return true;
}

}  // namespace detail

inline constexpr std::size_t kConnectivityAttempts = 1000;
inline constexpr std::size_t kLabelAttempts = 1000;

/// G(n, p) with p = 2 ln(n) / n and integer weights uniform on {1..100};
/// redrawn until connected. Edges are drawn by geometric skipping over the
/// pair sequence, so the cost is proportional to the edge count.
inline WeightedGraph erdos_renyi_graph(std::size_t n, std::mt19937_64& rng) {
  if (n < 2) throw Error(ErrorCode::BadParameters, "Erdos-Renyi generator needs n >= 2");
  const double p = std::min(1.0, 2.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
  std::uniform_int_distribution<int> weight(1, 100);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_q = std::log1p(-p);
  for (std::size_t attempt = 0; attempt < kConnectivityAttempts; ++attempt) {
    std::vector<Edge> edges;
    // Pairs (v, w) with w < v are visited in order; skip ahead geometrically.
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
      if (p >= 1.0) {
        ++w;
      } else {
        const double r = unit(rng);
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
      }
      while (w >= v && v < nn) {
        w -= v;
        ++v;
      }
      if (v < nn) edges.push_back({static_cast<Index>(v), static_cast<Index>(w), static_cast<double>(weight(rng))});
    }
    WeightedGraph graph(n, std::move(edges));
    if (graph.connected()) return graph;
  }
  throw Error(ErrorCode::ConnectivityRetriesExhausted,
              "no connected graph after " + std::to_string(kConnectivityAttempts) + " draws");
}

/// Random-graph instance: shortest-path metric, i.i.d. uniform group labels,
/// uniform random c0. Labels and c0 are redrawn when the quotas cannot be met.
inline Instance gen_erdos_renyi(std::size_t n, std::size_t m_groups, std::vector<std::size_t> quotas,
                                std::size_t c0_size, std::uint64_t seed) {
  if (m_groups == 0 || quotas.size() != m_groups) {
    throw Error(ErrorCode::WrongGroupCount, "need one quota per group");
  }
  if (c0_size > n) throw Error(ErrorCode::BadParameters, "c0 larger than the point set");
  std::mt19937_64 rng(seed);
  WeightedGraph graph = erdos_renyi_graph(n, rng);
  std::uniform_int_distribution<std::size_t> label(0, m_groups - 1);
  for (std::size_t attempt = 0; attempt < kLabelAttempts; ++attempt) {
    std::vector<std::size_t> groups(n);
    for (auto& g : groups) g = label(rng);
    auto c0 = detail::random_subset(n, c0_size, rng);
    if (!detail::quotas_feasible(groups, quotas, c0)) continue;
    Instance instance{Metric(std::move(graph)), std::move(groups), std::move(quotas), std::move(c0)};
    require_valid(instance);
    return instance;
  }
  throw Error(ErrorCode::InfeasibleQuota, "quotas could not be met by random labels after " +
                                              std::to_string(kLabelAttempts) + " draws");
}

struct GridInstance {
  Instance instance;
  double planted_opt = 0.5;
  /// Indices of the grid-point centers, row-major over (i, j).
  CenterSet planted_centers;
};

/// Planted-center point set: one cluster per integer grid point (i, j),
/// i, j < grid_side, each with points_total / grid_side^2 points uniform in
/// the radius-0.5 disk and its farthest point at exactly 0.5. Centers come
/// first, then each cluster's points. Quotas count the planted centers per group.
inline GridInstance gen_grid_clusters(std::size_t grid_side, std::size_t points_total, std::size_t m_groups,
                                      std::uint64_t seed) {
  const std::size_t clusters = grid_side * grid_side;
  if (grid_side < 2 || m_groups == 0 || points_total == 0 || points_total % clusters != 0) {
    throw Error(ErrorCode::BadParameters,
                "grid needs grid_side >= 2, m >= 1 and points_total divisible by grid_side^2");
  }
  const std::size_t per_cluster = points_total / clusters;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double kPi = 3.14159265358979323846;

  std::vector<double> coords;
  coords.reserve(2 * (clusters + points_total));
  for (std::size_t i = 0; i < grid_side; ++i) {
    for (std::size_t j = 0; j < grid_side; ++j) {
      coords.push_back(static_cast<double>(i));
      coords.push_back(static_cast<double>(j));
    }
  }
  for (std::size_t c = 0; c < clusters; ++c) {
    const double cx = coords[2 * c];
    const double cy = coords[2 * c + 1];
    std::vector<double> dx(per_cluster), dy(per_cluster);
    std::size_t far = 0;
    double far_r = -1.0;
    for (std::size_t t = 0; t < per_cluster; ++t) {
      const double r = 0.5 * std::sqrt(unit(rng));
      const double a = 2.0 * kPi * unit(rng);
      dx[t] = r * std::cos(a);
      dy[t] = r * std::sin(a);
      if (r > far_r) {
        far_r = r;
        far = t;
      }
    }
    // Push the farthest point out to radius 0.5. If rounding leaves it off
    // by an ulp, put it on the nearest axis, where 0.5 is exact.
    const double len = std::hypot(dx[far], dy[far]);
    double fx = len > 0.0 ? dx[far] * 0.5 / len : 0.5;
    double fy = len > 0.0 ? dy[far] * 0.5 / len : 0.0;
    const double ex = cx - (cx + fx);
    const double ey = cy - (cy + fy);
    if (std::sqrt(ex * ex + ey * ey) != 0.5) {  // same arithmetic as PointSet's l2 distance
      if (std::abs(fx) >= std::abs(fy)) {
        fx = std::copysign(0.5, fx);
        fy = 0.0;
      } else {
        fx = 0.0;
        fy = std::copysign(0.5, fy);
      }
    }
    dx[far] = fx;
    dy[far] = fy;
    for (std::size_t t = 0; t < per_cluster; ++t) {
      coords.push_back(cx + dx[t]);
      coords.push_back(cy + dy[t]);
    }
  }

  const std::size_t n = clusters + points_total;
  std::uniform_int_distribution<std::size_t> label(0, m_groups - 1);
  std::vector<std::size_t> groups(n);
  for (auto& g : groups) g = label(rng);
  std::vector<std::size_t> quotas(m_groups, 0);
  for (std::size_t c = 0; c < clusters; ++c) ++quotas[groups[c]];

  GridInstance out{Instance{Metric(PointSet(2, std::move(coords), Norm::L2)), std::move(groups), std::move(quotas), {}},
                   0.5, iota_points(clusters)};
  require_valid(out.instance);
  return out;
}

enum class AdversarialKind { Fig6, Fig7 };

struct AdversarialInstance {
  Instance instance;
  /// Point labels, e.g. "f5" or "m2".
  std::vector<std::string> names;
  /// Choices the deterministic run makes, in order, as readable steps.
  std::vector<std::string> forced_sequence;
  /// Cost of the forced run and the optimum, as functions of delta.
  double forced_cost = 0.0;
  double optimum = 0.0;
  CenterSet optimal_witness;
};

namespace detail {

struct FixtureEdge {
  const char* a;
  const char* b;
  double base;
  double slope;  // weight = base + slope * delta
};

// Two groups, quotas (1, 3). Index order puts f5 first so the deterministic
// first pick is f5; the remaining order fixes which swaps the run makes.
inline constexpr const char* kFig6Names[] = {"f5", "f1", "f2", "f3", "f4", "m4", "m2", "m5", "m1", "m3", "m6"};
inline constexpr FixtureEdge kFig6Edges[] = {
    {"f1", "f2", 2, 0.5}, {"f1", "f3", 2.5, 0}, {"f1", "f4", 3.5, 0}, {"f1", "f5", 3.5, 0}, {"f1", "m1", 1, 0},
    {"f1", "m2", 1.5, 0}, {"f1", "m3", 1.5, 0}, {"f1", "m4", 2.5, 0}, {"f1", "m5", 2.5, 0}, {"f1", "m6", 2.5, 0},
    {"f2", "f3", 3.5, 0}, {"f2", "f4", 2, 0},   {"f2", "f5", 5.5, 0}, {"f2", "m1", 1, 1},   {"f2", "m2", 3, 0},
    {"f2", "m3", 2.5, 0}, {"f2", "m4", 3, 0},   {"f2", "m5", 3, 0},   {"f2", "m6", 2.5, 0}, {"f3", "f4", 3, 0},
    {"f3", "f5", 3.5, 0}, {"f3", "m1", 2.5, 0}, {"f3", "m2", 2, 0},   {"f3", "m3", 1, 0},   {"f3", "m4", 2, 0},
    {"f3", "m5", 2, 0},   {"f3", "m6", 2, 0},   {"f4", "f5", 5, 0},   {"f4", "m1", 3, 0},   {"f4", "m2", 5, 0},
    {"f4", "m3", 4, 0},   {"f4", "m4", 5, -0.5}, {"f4", "m5", 5, 0},  {"f4", "m6", 1, 0},   {"f5", "m1", 4.5, 0},
    {"f5", "m2", 5, 0},   {"f5", "m3", 4, 0},   {"f5", "m4", 5, 0},   {"f5", "m5", 4, 0},   {"f5", "m6", 4, 0},
    {"m1", "m2", 2, 0},   {"m1", "m3", 1.5, 0}, {"m1", "m4", 2, 0},   {"m1", "m5", 2, 0},   {"m1", "m6", 2, 0},
    {"m2", "m3", 1, 0},   {"m2", "m4", 1, 0},   {"m2", "m5", 1, 0},   {"m2", "m6", 4, 0},   {"m3", "m4", 1, 0},
    {"m3", "m5", 1, 0},   {"m3", "m6", 3, 0},   {"m4", "m5", 1, 0},   {"m4", "m6", 4, 0},   {"m5", "m6", 4, 0},
};

// Three groups (m*, f*, z*), quotas (4, 1, 1).
inline constexpr const char* kFig7Names[] = {"f1", "f2", "f3", "f4", "m2", "m4", "m5", "m6", "m1", "m3", "z2", "z1"};
inline constexpr FixtureEdge kFig7Edges[] = {
    {"m1", "m2", 3, 0},     {"m1", "m3", 5, 0},     {"m1", "m4", 4, 0},     {"m1", "m5", 1, 0},
    {"m1", "m6", 4.5, 0},   {"m1", "f1", 1, 0},     {"m1", "f2", 1, 1.5},   {"m1", "f3", 5.5, 0},
    {"m1", "f4", 6, 0},     {"m1", "z1", 7, 0},     {"m1", "z2", 4, 0},     {"m2", "m3", 4, 0},
    {"m2", "m4", 3, 0},     {"m2", "m5", 3.5, 0},   {"m2", "m6", 3.5, 0},   {"m2", "f1", 2, 0},
    {"m2", "f2", 4, 0.5},   {"m2", "f3", 8.5, 0},   {"m2", "f4", 5, 0},     {"m2", "z1", 8, 0},
    {"m2", "z2", 4.5, 0},   {"m3", "m4", 3, 0},     {"m3", "m5", 4.5, 0},   {"m3", "m6", 1, 0},
    {"m3", "f1", 6, 0},     {"m3", "f2", 4, 0},     {"m3", "f3", 5, 0.5},   {"m3", "f4", 1, 0},
    {"m3", "z1", 7, 0},     {"m3", "z2", 1, 0.5},   {"m4", "m5", 3.5, 0},   {"m4", "m6", 2.5, 0},
    {"m4", "f1", 5, 0},     {"m4", "f2", 4.5, 0},   {"m4", "f3", 8, 0.5},   {"m4", "f4", 2, 0},
    {"m4", "z1", 8, 0},     {"m4", "z2", 4, 0.5},   {"m5", "m6", 4, 0},     {"m5", "f1", 1.5, 0},
    {"m5", "f2", 2, 0},     {"m5", "f3", 5, 0},     {"m5", "f4", 5.5, 0},   {"m5", "z1", 8, 0},
    {"m5", "z2", 3.5, 0},   {"m6", "f1", 5.5, 0},   {"m6", "f2", 3.5, 0},   {"m6", "f3", 6, 0},
    {"m6", "f4", 1.5, 0},   {"m6", "z1", 8, 0},     {"m6", "z2", 2, 0},     {"f1", "f2", 2, 1},
    {"f1", "f3", 6.5, 0},   {"f1", "f4", 7, 0},     {"f1", "z1", 6.5, 0},   {"f1", "z2", 5, 0},
    {"f2", "f3", 4.5, 0},   {"f2", "f4", 5, 0},     {"f2", "z1", 8, 0},     {"f2", "z2", 4.5, 0},
    {"f3", "f4", 6, 0.5},   {"f3", "z1", 4, 0},     {"f3", "z2", 4, 0},     {"f4", "z1", 6.5, 0},
    {"f4", "z2", 2, 0.5},   {"z1", "z2", 8, 0},
};

template <std::size_t N>
Index fixture_index(const char* const (&names)[N], std::string_view name) {
  for (std::size_t i = 0; i < N; ++i)
    if (name == names[i]) return i;
  throw std::logic_error("unknown fixture point " + std::string(name));
}

template <std::size_t N, std::size_t E>
DistanceMatrix fixture_metric(const char* const (&names)[N], const FixtureEdge (&edges)[E], double delta) {
  std::vector<Edge> list;
  list.reserve(E);
  for (const auto& e : edges)
    list.push_back({fixture_index(names, e.a), fixture_index(names, e.b), e.base + e.slope * delta});
  // Complete graph whose weights already satisfy the triangle inequality;
  // the shortest-path closure leaves them unchanged and yields a matrix.
  return shortest_path_matrix(WeightedGraph(N, std::move(list)));
}

}  // namespace detail

/// Lower-bound families for the two-group and recursive algorithms. With
/// deterministic selection, fair_two_groups on Fig6 and fair_m_groups on Fig7
/// reproduce the bad runs; both optima are small.
inline AdversarialInstance gen_adversarial(AdversarialKind kind, double delta) {
  if (!(delta > 0.0 && delta < 0.1)) throw Error(ErrorCode::BadDelta, "delta must lie in (0, 0.1)");
  AdversarialInstance out;
  if (kind == AdversarialKind::Fig6) {
    const auto& names = detail::kFig6Names;
    out.names.assign(std::begin(names), std::end(names));
    std::vector<std::size_t> groups;
    for (const auto& s : out.names) groups.push_back(s[0] == 'f' ? 0 : 1);
    out.instance = Instance{Metric(detail::fixture_metric(names, detail::kFig6Edges, delta)), std::move(groups),
                            {1, 3}, {}};
    out.forced_sequence = {"greedy f5", "greedy f2", "greedy f3", "greedy f1", "swap f3->m4",
                           "swap f1->m2", "regreedy f5", "fill m5"};
    out.forced_cost = 5.0 - delta / 2.0;
    out.optimum = 1.0 + delta;
    for (const char* s : {"f5", "m1", "m3", "m6"}) out.optimal_witness.push_back(detail::fixture_index(names, s));
  } else {
    const auto& names = detail::kFig7Names;
    out.names.assign(std::begin(names), std::end(names));
    std::vector<std::size_t> groups;
    for (const auto& s : out.names) groups.push_back(s[0] == 'm' ? 0 : s[0] == 'f' ? 1 : 2);
    out.instance = Instance{Metric(detail::fixture_metric(names, detail::kFig7Edges, delta)), std::move(groups),
                            {4, 1, 1}, {}};
    out.forced_sequence = {"greedy f1", "greedy f4", "greedy z1", "greedy f3",   "greedy f2", "greedy z2",
                           "swap f1->m2", "swap f4->m4", "recurse f3", "recurse f2", "swap f3->z2",
                           "fill m5", "fill m6"};
    out.forced_cost = 8.0;
    out.optimum = 1.0 + 1.5 * delta;
    for (const char* s : {"m1", "m2", "m3", "m4", "f3", "z1"})
      out.optimal_witness.push_back(detail::fixture_index(names, s));
  }
  std::sort(out.optimal_witness.begin(), out.optimal_witness.end());
  return out;
}

enum class AdultGrouping { Gender, Race };

inline constexpr std::size_t kAdultRows = 25000;

/// Group names in id order.
inline std::vector<std::string> adult_group_names(AdultGrouping grouping) {
  if (grouping == AdultGrouping::Gender) return {"Female", "Male"};
  return {"White", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other", "Black"};
}

struct AdultTable {
  /// Row-major, six raw numeric features per row.
  std::vector<double> features;
  std::vector<std::size_t> groups;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Reads the first `limit` records of a UCI Adult file. Blank lines are
/// skipped; any other line that is not a 15-field record is an error.
inline AdultTable read_adult(const std::string& path, AdultGrouping grouping, std::size_t limit = kAdultRows) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path);
  constexpr std::size_t kNumeric[] = {0, 2, 4, 10, 11, 12};
  const std::size_t label_column = grouping == AdultGrouping::Gender ? 9 : 8;
  const auto names = adult_group_names(grouping);

  AdultTable table;
  std::string line;
  std::size_t line_no = 0;
  while (table.groups.size() < limit && std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(detail::trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRow, path + ": row " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 15) throw bad("expected 15 fields, got " + std::to_string(fields.size()));
    for (std::size_t c : kNumeric) {
      double value = 0.0;
      const auto f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size()) throw bad("column " + std::to_string(c) + " is not numeric");
      table.features.push_back(value);
    }
    const auto it = std::find(names.begin(), names.end(), fields[label_column]);
    if (it == names.end()) throw bad("unknown group value '" + std::string(fields[label_column]) + "'");
    table.groups.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  return table;
}

/// Z-scores each column in place (population variance).
inline void standardize_columns(std::vector<double>& values, std::size_t dim) {
  const std::size_t rows = values.size() / dim;
  if (rows == 0) return;
  for (std::size_t c = 0; c < dim; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) mean += values[r * dim + c];
    mean /= static_cast<double>(rows);
    double var = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = values[r * dim + c] - mean;
      var += d * d;
    }
    var /= static_cast<double>(rows);
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t r = 0; r < rows; ++r) values[r * dim + c] = (values[r * dim + c] - mean) * scale;
  }
}

/// Adult instance: first 25000 records, six standardized numeric features,
/// l1 metric, groups by gender or race, seeded random c0.
inline Instance ingest_adult(const std::string& path, AdultGrouping grouping, std::vector<std::size_t> quotas,
                             std::size_t c0_size, std::uint64_t seed) {
  AdultTable table = read_adult(path, grouping);
  if (quotas.size() != adult_group_names(grouping).size()) {
    throw Error(ErrorCode::WrongGroupCount, "need one quota per " + std::string(grouping == AdultGrouping::Gender
                                                                                     ? "gender"
                                                                                     : "race") + " group");
  }
  standardize_columns(table.features, 6);
  const std::size_t n = table.groups.size();
  if (c0_size > n) throw Error(ErrorCode::BadParameters, "c0 larger than the point set");
  std::mt19937_64 rng(seed);
  auto c0 = detail::random_subset(n, c0_size, rng);
  Instance instance{Metric(PointSet(6, std::move(table.features), Norm::L1)), std::move(table.groups),
                    std::move(quotas), std::move(c0)};
  require_valid(instance);
  return instance;
}

}  // namespace fairkc
