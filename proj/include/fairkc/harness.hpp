#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fairkc/generators.hpp"
#include "fairkc/instance_io.hpp"
#include "fairkc/oracle.hpp"
#include "fairkc/solvers.hpp"

namespace fairkc {

/// One solver run inside an experiment.
struct ExperimentRecord {
  std::string experiment;
  std::string setting;
  std::string algorithm;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double cost = 0.0;
  std::optional<double> opt_value;
  std::optional<double> approx_factor;
  std::optional<double> wall_time_seconds;
  std::vector<std::size_t> group_center_counts;
  std::size_t max_group_deviation = 0;
};

/// Five-number summary plus mean of one column over the trials of a (setting, algorithm) pair.
struct SummaryRow {
  std::string experiment;
  std::string setting;
  std::string algorithm;
  std::string statistic;
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
  std::optional<double> ratio_to_previous;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;
  std::vector<SummaryRow> summaries;
};

struct ExperimentOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 0;  // 0 means the command's default
  bool deterministic = false;
  /// Wall times are machine noise; they are only written when asked for.
  bool timings = false;
  std::string adult_path;
  std::string dataset;
  std::vector<std::size_t> quotas;
  std::vector<std::size_t> sizes;
};

// ---------------------------------------------------------------- seeds

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of trial `trial` in stream `stream` (one stream per setting). Each
/// trial's seed depends only on these three values, never on run order.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(base) + stream) + trial);
}

// ---------------------------------------------------------------- stats

/// Linear-interpolation quantile of sorted data (the common "type 7" rule).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

inline std::vector<std::size_t> counts_per_group(const Instance& instance, std::span<const Index> centers) {
  return group_counts(instance.groups, centers, instance.group_count());
}

inline std::size_t max_deviation(const std::vector<std::size_t>& counts) {
  if (counts.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  return *hi - *lo;
}

/// Summaries of `field` per (setting, algorithm), in order of first appearance.
/// Records where the field is absent are skipped.
template <typename Field>
std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records, const std::string& statistic,
                                  Field field) {
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& r : records) {
    std::pair key{r.setting, r.algorithm};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(std::move(key));
  }
  std::vector<SummaryRow> out;
  for (const auto& [setting, algorithm] : keys) {
    std::vector<double> values;
    std::string experiment;
    for (const auto& r : records) {
      if (r.setting != setting || r.algorithm != algorithm) continue;
      experiment = r.experiment;
      if (const std::optional<double> v = field(r)) values.push_back(*v);
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end());
    SummaryRow row;
    row.experiment = experiment;
    row.setting = setting;
    row.algorithm = algorithm;
    row.statistic = statistic;
    row.count = values.size();
    row.min = values.front();
    row.q1 = quantile_sorted(values, 0.25);
    row.median = quantile_sorted(values, 0.5);
    row.q3 = quantile_sorted(values, 0.75);
    row.max = values.back();
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean = sum / static_cast<double>(values.size());
    out.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------- CSV

inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

inline constexpr const char* kCsvHeader =
    "row_kind,experiment,setting,algorithm,trial,seed,n,k,cost,opt_value,approx_factor,wall_time_seconds,"
    "group_center_counts,max_group_deviation,statistic,count,min,q1,median,q3,max,mean,ratio_to_previous";

inline void write_csv(std::ostream& out, const ExperimentResult& result) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out << kCsvHeader << '\n';
  for (const auto& r : result.records) {
    std::string counts;
    for (std::size_t i = 0; i < r.group_center_counts.size(); ++i) {
      if (i) counts += ';';
      counts += std::to_string(r.group_center_counts[i]);
    }
    out << "trial," << r.experiment << ',' << r.setting << ',' << r.algorithm << ',' << r.trial << ',' << r.seed
        << ',' << r.n << ',' << r.k << ',' << format_number(r.cost) << ',' << opt(r.opt_value) << ','
        << opt(r.approx_factor) << ',' << opt(r.wall_time_seconds) << ',' << counts << ','
        << r.max_group_deviation << ",,,,,,,,,\n";
  }
  for (const auto& s : result.summaries) {
    out << "summary," << s.experiment << ',' << s.setting << ',' << s.algorithm << ",,,,,,,,,,," << s.statistic
        << ',' << s.count << ',' << format_number(s.min) << ',' << format_number(s.q1) << ','
        << format_number(s.median) << ',' << format_number(s.q3) << ',' << format_number(s.max) << ','
        << format_number(s.mean) << ',' << opt(s.ratio_to_previous) << '\n';
  }
}

// ---------------------------------------------------------------- experiments

namespace detail {

inline FairSolveConfig solver_config(const ExperimentOptions& opts, std::uint64_t seed) {
  return {opts.deterministic ? SelectionMode::Deterministic : SelectionMode::SeededRandom, splitmix64(seed)};
}

inline ExperimentRecord make_record(const std::string& experiment, const std::string& setting,
                                    const std::string& algorithm, std::size_t trial, std::uint64_t seed,
                                    const Instance& instance, const SolveReport& report,
                                    const ExperimentOptions& opts) {
  ExperimentRecord r;
  r.experiment = experiment;
  r.setting = setting;
  r.algorithm = algorithm;
  r.trial = trial;
  r.seed = seed;
  r.n = instance.n();
  r.k = instance.k();
  r.cost = report.cost;
  if (opts.timings) r.wall_time_seconds = report.wall_time;
  r.group_center_counts = counts_per_group(instance, report.centers);
  r.max_group_deviation = max_deviation(r.group_center_counts);
  return r;
}

inline std::size_t trials_or(const ExperimentOptions& opts, std::size_t fallback) {
  return opts.trials ? opts.trials : fallback;
}

inline std::optional<double> factor_of(const ExperimentRecord& r) { return r.approx_factor; }
inline std::optional<double> cost_of(const ExperimentRecord& r) { return r.cost; }

}  // namespace detail

struct ApproxSetting {
  std::string label;
  std::vector<std::size_t> quotas;
  std::size_t c0_size;
};

/// The seven small random-graph settings of the approximation-factor study (n = 25).
inline std::vector<ApproxSetting> approx_settings() {
  return {{"1", {2, 2}, 2},       {"2", {4, 2}, 2},       {"3", {2, 2, 2}, 2},       {"4", {5, 1, 1}, 1},
          {"5", {2, 2, 2, 2}, 0}, {"6", {3, 3, 1, 1}, 0}, {"7", {2, 2, 2, 1, 1}, 0}};
}

inline constexpr std::size_t kApproxN = 25;

/// Approximation factor of fair_m_groups (and fair_two_groups when m = 2)
/// against the exact fair optimum on n = 25 random graphs.
inline ExperimentResult run_exp_approx(const ExperimentOptions& opts) {
  const std::size_t trials = detail::trials_or(opts, 200);
  ExperimentResult result;
  const auto settings = approx_settings();
  for (std::size_t s = 0; s < settings.size(); ++s) {
    const auto& setting = settings[s];
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t seed = trial_seed(opts.seed, s, t);
      const Instance instance =
          gen_erdos_renyi(kApproxN, setting.quotas.size(), setting.quotas, setting.c0_size, seed);
      const double opt = brute_force_fair(instance).opt_value;
      const auto add = [&](const std::string& name, const SolveReport& report) {
        auto r = detail::make_record("approx", setting.label, name, t, seed, instance, report, opts);
        r.opt_value = opt;
        r.approx_factor = approx_factor(report.cost, opt);
        result.records.push_back(std::move(r));
      };
      const auto config = detail::solver_config(opts, seed);
      add("fairm", fair_m_groups(instance, config));
      if (setting.quotas.size() == 2) add("fair2", fair_two_groups(instance, config));
    }
  }
  result.summaries = summarize(result.records, "approx_factor", detail::factor_of);
  return result;
}

struct GridStudy {
  std::size_t grid_side = 5;
  std::size_t points_total = 2500;
  std::vector<std::size_t> group_counts = {2, 3, 4, 5, 6, 7, 8, 9, 10};
};

/// Approximation factor of fair_m_groups on planted grid clusters, whose
/// optimum is known to be 0.5, for a range of group counts.
inline ExperimentResult run_exp_grid(const ExperimentOptions& opts, const GridStudy& study = {}) {
  const std::size_t trials = detail::trials_or(opts, 50);
  ExperimentResult result;
  for (std::size_t m : study.group_counts) {
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t seed = trial_seed(opts.seed, m, t);
      const GridInstance grid = gen_grid_clusters(study.grid_side, study.points_total, m, seed);
      const auto report = fair_m_groups(grid.instance, detail::solver_config(opts, seed));
      auto r = detail::make_record("grid", "m=" + std::to_string(m), "fairm", t, seed, grid.instance, report, opts);
      r.opt_value = grid.planted_opt;
      r.approx_factor = approx_factor(report.cost, grid.planted_opt);
      result.records.push_back(std::move(r));
    }
  }
  result.summaries = summarize(result.records, "approx_factor", detail::factor_of);
  return result;
}

/// Wall time of fair_m_groups on random graphs of growing size (m = 5,
/// quotas 4 each, no c0). Summary rows carry the mean time per size and its
/// ratio to the previous size; both are empty unless timings are on.
inline ExperimentResult run_exp_runtime(const ExperimentOptions& opts) {
  const std::size_t trials = detail::trials_or(opts, 10);
  const std::vector<std::size_t> sizes =
      opts.sizes.empty() ? std::vector<std::size_t>{1000, 2000, 5000, 10000, 20000} : opts.sizes;
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw Error(ErrorCode::BadParameters, "sizes must be ascending");
  const std::vector<std::size_t> quotas(5, 4);
  ExperimentResult result;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t seed = trial_seed(opts.seed, s, t);
      const Instance instance = gen_erdos_renyi(sizes[s], 5, quotas, 0, seed);
      const auto report = fair_m_groups(instance, detail::solver_config(opts, seed));
      result.records.push_back(detail::make_record("runtime", std::to_string(sizes[s]), "fairm", t, seed, instance,
                                                   report, opts));
    }
  }
  result.summaries =
      summarize(result.records, "wall_time_seconds", [](const ExperimentRecord& r) { return r.wall_time_seconds; });
  for (std::size_t i = 1; i < result.summaries.size(); ++i)
    result.summaries[i].ratio_to_previous = result.summaries[i].mean / result.summaries[i - 1].mean;
  return result;
}

namespace detail {

/// Instance source for the heuristic and price-of-fairness comparisons.
class DatasetSource {
 public:
  DatasetSource(const ExperimentOptions& opts, bool equal_quotas) : name_(opts.dataset) {
    if (name_ == "er2000") {
      quotas_ = std::vector<std::size_t>(10, 4);
      c0_size_ = 10;
    } else if (name_ == "adult_gender" || name_ == "adult_race") {
      grouping_ = name_ == "adult_gender" ? AdultGrouping::Gender : AdultGrouping::Race;
      quotas_ = grouping_ == AdultGrouping::Gender ? std::vector<std::size_t>{200, 200}
                                                   : std::vector<std::size_t>(5, 50);
      c0_size_ = 100;
      if (opts.adult_path.empty()) throw Error(ErrorCode::FileNotFound, "the adult datasets need --adult-path");
      table_ = read_adult(opts.adult_path, grouping_);
      standardize_columns(table_.features, 6);
    } else {
      throw Error(ErrorCode::BadParameters,
                  "unknown dataset '" + name_ + "' (expected er2000, adult_gender or adult_race)");
    }
    if (!opts.quotas.empty()) quotas_ = opts.quotas;
    if (equal_quotas && std::adjacent_find(quotas_.begin(), quotas_.end(), std::not_equal_to<>()) != quotas_.end()) {
      throw Error(ErrorCode::BadParameters, "this comparison needs equal quotas");
    }
  }

  Instance make(std::uint64_t seed) const {
    if (name_ == "er2000") return gen_erdos_renyi(2000, quotas_.size(), quotas_, c0_size_, seed);
    if (quotas_.size() != adult_group_names(grouping_).size()) {
      throw Error(ErrorCode::WrongGroupCount, "need one quota per group");
    }
    std::mt19937_64 rng(seed);
    auto c0 = random_subset(table_.groups.size(), c0_size_, rng);
    Instance instance{Metric(PointSet(6, table_.features, Norm::L1)), table_.groups, quotas_, std::move(c0)};
    require_valid(instance);
    return instance;
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::size_t> quotas_;
  std::size_t c0_size_ = 0;
  AdultGrouping grouping_ = AdultGrouping::Gender;
  AdultTable table_;
};

}  // namespace detail

/// fair_m_groups against the two baselines on the same instance and seed.
inline ExperimentResult run_exp_heuristics(const ExperimentOptions& opts) {
  const detail::DatasetSource source(opts, false);
  const std::size_t trials = detail::trials_or(opts, 20);
  ExperimentResult result;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = trial_seed(opts.seed, 0, t);
    const Instance instance = source.make(seed);
    const auto config = detail::solver_config(opts, seed);
    const auto add = [&](const char* name, const SolveReport& report) {
      result.records.push_back(
          detail::make_record("heuristics", source.name(), name, t, seed, instance, report, opts));
    };
    add("fairm", fair_m_groups(instance, config));
    add("heuristic_a", heuristic_a(instance, config));
    add("heuristic_b", heuristic_b(instance, config));
  }
  result.summaries = summarize(result.records, "cost", detail::cost_of);
  return result;
}

/// Unconstrained greedy against fair_m_groups with equal quotas: both costs,
/// and how unbalanced the greedy centers are across groups.
inline ExperimentResult run_exp_pof(const ExperimentOptions& opts) {
  const detail::DatasetSource source(opts, true);
  const std::size_t trials = detail::trials_or(opts, 20);
  ExperimentResult result;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = trial_seed(opts.seed, 0, t);
    const Instance instance = source.make(seed);
    const auto config = detail::solver_config(opts, seed);
    result.records.push_back(
        detail::make_record("pof", source.name(), "greedy", t, seed, instance, unfair_greedy(instance, config), opts));
    result.records.push_back(
        detail::make_record("pof", source.name(), "fairm", t, seed, instance, fair_m_groups(instance, config), opts));
  }
  result.summaries = summarize(result.records, "cost", detail::cost_of);
  auto deviation = summarize(result.records, "max_group_deviation", [](const ExperimentRecord& r) {
    return std::optional<double>(static_cast<double>(r.max_group_deviation));
  });
  result.summaries.insert(result.summaries.end(), deviation.begin(), deviation.end());
  return result;
}

// ---------------------------------------------------------------- solve

inline const std::vector<std::string>& solve_algorithms() {
  static const std::vector<std::string> names = {"greedy",      "fair2",      "fairm",        "heuristic_a",
                                                 "heuristic_b", "oracle_fair", "oracle_unfair"};
  return names;
}

/// Runs one named algorithm and returns its report as JSON.
inline Json solve_to_json(const Instance& instance, const std::string& algorithm, const FairSolveConfig& config) {
  Json j;
  j["algorithm"] = algorithm;
  if (algorithm == "oracle_fair" || algorithm == "oracle_unfair") {
    const auto result =
        algorithm == "oracle_fair" ? brute_force_fair(instance) : brute_force_unfair(instance, instance.k());
    j["opt_value"] = result.opt_value;
    j["cost"] = result.opt_value;
    j["centers"] = result.witness;
    j["enumerated"] = result.enumerated;
    j["group_center_counts"] = counts_per_group(instance, result.witness);
    return j;
  }
  SolveReport report;
  if (algorithm == "greedy") {
    report = unfair_greedy(instance, config);
  } else if (algorithm == "fair2") {
    report = fair_two_groups(instance, config);
  } else if (algorithm == "fairm") {
    report = fair_m_groups(instance, config);
  } else if (algorithm == "heuristic_a") {
    report = heuristic_a(instance, config);
  } else if (algorithm == "heuristic_b") {
    report = heuristic_b(instance, config);
  } else {
    throw Error(ErrorCode::BadParameters, "unknown algorithm '" + algorithm + "'");
  }
  j["centers"] = report.centers;
  j["cost"] = report.cost;
  j["wall_time"] = report.wall_time;
  j["swaps_performed"] = report.swaps_performed;
  j["recursion_depth"] = report.recursion_depth;
  j["group_center_counts"] = counts_per_group(instance, report.centers);
  return j;
}

}  // namespace fairkc
