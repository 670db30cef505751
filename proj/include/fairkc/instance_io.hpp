#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fairkc/core.hpp"

namespace fairkc {

using Json = nlohmann::json;

/// Instance JSON: {n, metric, values | coords | edges, groups, quotas, c0}.
/// Matrix values may be a flat row-major array or an array of rows.
inline Json instance_to_json(const Instance& instance) {
  Json j;
  const std::size_t n = instance.n();
  j["n"] = n;
  const Metric& metric = instance.metric;
  if (const auto* m = metric.matrix()) {
    j["metric"] = "matrix";
    j["values"] = m->values();
  } else if (const auto* p = metric.points()) {
    j["metric"] = p->norm() == Norm::L1 ? "points_l1" : "points_l2";
    Json coords = Json::array();
    for (Index i = 0; i < n; ++i) {
      const auto row = p->point(i);
      coords.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["coords"] = std::move(coords);
  } else {
    j["metric"] = "graph";
    Json edges = Json::array();
    for (const auto& e : metric.graph()->graph().edges()) edges.push_back(Json::array({e.u, e.v, e.weight}));
    j["edges"] = std::move(edges);
  }
  j["groups"] = instance.groups;
  j["quotas"] = instance.quotas;
  j["c0"] = instance.c0;
  return j;
}

namespace detail {

[[noreturn]] inline void malformed(const std::string& why) {
  throw Error(ErrorCode::MalformedInstance, "instance JSON: " + why);
}

inline Metric metric_from_json(const Json& j, std::size_t n) {
  const auto& kind = j.at("metric").get_ref<const std::string&>();
  if (kind == "matrix") {
    const Json& values = j.at("values");
    std::vector<double> flat;
    if (!values.empty() && values.front().is_array()) {
      if (values.size() != n) malformed("matrix needs n rows");
      for (const auto& row : values) {
        if (row.size() != n) malformed("matrix rows need n entries");
        for (const auto& v : row) flat.push_back(v.get<double>());
      }
    } else {
      flat = values.get<std::vector<double>>();
    }
    if (flat.size() != n * n) malformed("matrix needs n*n values");
    for (Index a = 0; a < n; ++a) {
      if (flat[a * n + a] != 0.0) malformed("matrix diagonal must be zero");
      for (Index b = 0; b < n; ++b) {
        if (!(flat[a * n + b] >= 0.0)) malformed("matrix entries must be non-negative");
        if (flat[a * n + b] != flat[b * n + a]) malformed("matrix must be symmetric");
      }
    }
    return Metric(DistanceMatrix(n, std::move(flat)));
  }
  if (kind == "points_l1" || kind == "points_l2") {
    const auto rows = j.at("coords").get<std::vector<std::vector<double>>>();
    if (rows.size() != n) malformed("coords needs n rows");
    if (n > 0 && rows.front().empty()) malformed("coords rows must be non-empty");
    return Metric(PointSet::from_rows(rows, kind == "points_l1" ? Norm::L1 : Norm::L2));
  }
  if (kind == "graph") {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) malformed("edges must be [u, v, weight] triples");
      edges.push_back({e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>()});
    }
    return Metric(WeightedGraph(n, std::move(edges)));
  }
  malformed("unknown metric '" + kind + "'");
}

}  // namespace detail

/// Parses and validates. Structural problems raise MalformedInstance;
/// well-formed files that break an instance invariant raise that invariant's error.
inline Instance instance_from_json(const Json& j) {
  Instance instance;
  try {
    if (!j.is_object()) detail::malformed("top level must be an object");
    const auto n = j.at("n").get<std::size_t>();
    instance.metric = detail::metric_from_json(j, n);
    instance.groups = j.at("groups").get<std::vector<std::size_t>>();
    instance.quotas = j.at("quotas").get<std::vector<std::size_t>>();
    instance.c0 = j.value("c0", std::vector<std::size_t>{});
  } catch (const Json::exception& e) {
    detail::malformed(e.what());
  }
  require_valid(instance);
  return instance;
}

inline Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedInstance, path + ": " + e.what());
  }
  return instance_from_json(j);
}

inline void write_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path);
  out << instance_to_json(instance).dump() << '\n';
}

}  // namespace fairkc
