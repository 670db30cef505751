// Acceptance run: one PASS/FAIL line per primary criterion. Exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "fairkc/harness.hpp"
#include "test_support.hpp"

using namespace fairkc;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("%s %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string adult_path() {
  if (const char* env = std::getenv("FAIRKC_ADULT_PATH")) return env;
  return FAIRKC_ADULT_PATH;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

double bound_for(std::size_t m) { return 3.0 * std::pow(2.0, static_cast<double>(m) - 1.0) - 1.0; }

bool quota_exact(const Instance& inst, const SolveReport& r) {
  return group_counts(inst.groups, r.centers, inst.group_count()) == inst.quotas;
}

Outcome greedy_sweep() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::size_t instances = 0, runs = 0, violations = 0;
  double worst = 0.0;
  for (std::size_t t = 0; t < 600; ++t) {
    const std::size_t n = 3 + t % 10;
    const auto inst = fairkc::testing::random_fair_instance(n, 1, t, rng, n);
    ++instances;
    for (std::size_t k = 1; k + inst.c0.size() <= n; ++k) {
      auto chooser = t % 2 ? Chooser::seeded(t * 97 + k) : Chooser::deterministic();
      const auto trace = greedy_k_center(inst, k, chooser);
      const double opt = brute_force_unfair(inst, k).opt_value;
      const double cost = clustering_cost(inst, trace.chosen);
      ++runs;
      if (!two_approx_check(inst, trace, opt)) ++violations;
      if (opt > 0) worst = std::max(worst, cost / opt);
    }
  }
  const double secs = elapsed_since(start);
  return {violations == 0 && instances >= 500 && secs < 60.0,
          std::to_string(instances) + " instances, " + std::to_string(runs) + " (instance, k) runs, " +
              std::to_string(violations) + " violations, worst ratio " + fmt(worst) + ", " + fmt(secs, 1) +
              "s (< 60s)"};
}

Outcome fair_sweep(bool two_group_solver) {
  std::mt19937_64 rng(two_group_solver ? 2002 : 3003);
  std::size_t instances = 0, violations = 0, inexact = 0;
  std::map<std::size_t, double> worst;
  for (std::size_t t = 0; t < 600; ++t) {
    const std::size_t m = two_group_solver ? 2 : 2 + t % 3;
    const std::size_t n = 5 + t % 8;
    const auto inst = fairkc::testing::random_fair_instance(n, m, t, rng);
    const double opt = brute_force_fair(inst).opt_value;
    const FairSolveConfig cfg{t % 2 ? SelectionMode::SeededRandom : SelectionMode::Deterministic, t};
    const auto r = two_group_solver ? fair_two_groups(inst, cfg) : fair_m_groups(inst, cfg);
    const double bound = two_group_solver ? 5.0 : bound_for(m);
    ++instances;
    if (!within_factor(r.cost, bound, opt)) ++violations;
    if (!quota_exact(inst, r)) ++inexact;
    if (opt > 0) worst[m] = std::max(worst[m], r.cost / opt);
  }
  std::string detail = std::to_string(instances) + " instances, " + std::to_string(violations) + " bound violations, " +
                       std::to_string(inexact) + " quota mismatches; worst ratio";
  for (const auto& [m, w] : worst) detail += " m=" + std::to_string(m) + ":" + fmt(w);
  return {violations == 0 && inexact == 0 && instances >= 500, detail};
}

Outcome approx_study() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentOptions opts;
  opts.seed = 2024;
  opts.trials = 200;
  const auto result = run_exp_approx(opts);
  const double secs = elapsed_since(start);
  double worst = 0.0, worst_median = 0.0;
  std::size_t rows = 0;
  for (const auto& r : result.records)
    if (r.algorithm == "fairm") {
      worst = std::max(worst, *r.approx_factor);
      ++rows;
    }
  std::string medians;
  for (const auto& s : result.summaries) {
    if (s.algorithm != "fairm") continue;
    worst_median = std::max(worst_median, s.median);
    medians += " (" + s.setting + ")" + fmt(s.median, 2);
  }
  return {worst <= 2.5 && worst_median <= 1.8 && rows == 1400 && secs < 300.0,
          std::to_string(rows) + " runs; max factor " + fmt(worst) + " (<= 2.5); medians" + medians +
              " (<= 1.8); " + fmt(secs, 1) + "s (< 300s)"};
}

Outcome grid_study() {
  // The planted optimum must be exact where the oracle can check it.
  std::size_t certified = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (std::size_t m : {2, 3}) {
      for (const auto& [side, points] : {std::pair{2, 40}, std::pair{3, 18}}) {
        const auto grid = gen_grid_clusters(side, points, m, seed);
        const double opt = brute_force_fair(grid.instance).opt_value;
        if (opt != grid.planted_opt) {
          return {false, "oracle optimum " + fmt(opt, 6) + " != 0.5 at grid_side " + std::to_string(side)};
        }
        ++certified;
      }
    }
  }
  ExperimentOptions opts;
  opts.seed = 77;
  opts.trials = 30;
  const auto result = run_exp_grid(opts, GridStudy{5, 2500, {2, 3, 4, 5, 6, 7, 8, 9, 10}});
  double worst = 0.0, median_m2 = 0.0, worst_median = 0.0;
  std::string medians;
  for (const auto& s : result.summaries) {
    worst = std::max(worst, s.max);
    worst_median = std::max(worst_median, s.median);
    if (s.setting == "m=2") median_m2 = s.median;
    medians += " " + s.setting.substr(2) + ":" + fmt(s.median, 2);
  }
  const bool mild = worst_median <= 1.5 * median_m2;
  return {worst <= 3.0 && mild,
          "optimum 0.5 certified on " + std::to_string(certified) + " small grids; max factor " + fmt(worst) +
              " (<= 3.0); median factor per m" + medians + "; max median / median at m=2 = " +
              fmt(worst_median / median_m2) + " (<= 1.5)"};
}

Outcome exchange_runs() {
  std::mt19937_64 rng(4004);
  std::size_t closure = 0, quota = 0, chains = 0, strict = 0, runs = 0;
  for (int run = 0; run < 1000; ++run) {
    const std::size_t m = 2 + rng() % 5;
    const std::size_t n = m + rng() % (201 - m);
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 30);
    std::vector<std::size_t> groups(n);
    for (auto& g : groups) g = rng() % m;
    std::vector<Index> perm = iota_points(n);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<Index>> clusters(k);
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
    ++runs;
    if (!satisfies_closure_property(r, clusters, groups, m)) ++closure;
    if (!satisfies_quota_property(r, groups, quotas)) ++quota;
    if (r.chain_count > k) ++chains;
    const bool met = r.counts == quotas;
    if (met ? !r.g_set.empty() : !(r.g_set.size() < m && !r.g_set.empty())) ++strict;
  }
  return {closure + quota + chains + strict == 0,
          std::to_string(runs) + " runs; violations: closure " + std::to_string(closure) + ", quota " +
              std::to_string(quota) + ", chains > k " + std::to_string(chains) + ", G not a proper subset " +
              std::to_string(strict)};
}

Outcome runtime_scaling() {
  ExperimentOptions opts;
  opts.seed = 99;
  opts.trials = 8;
  opts.timings = true;
  opts.sizes = {10000, 20000};
  const auto result = run_exp_runtime(opts);
  const double t1 = result.summaries.at(0).mean;
  const double t2 = result.summaries.at(1).mean;
  const double ratio = t2 / t1;
  return {ratio >= 1.5 && ratio <= 3.5, "mean time n=10000 " + fmt(t1 * 1e3, 2) + "ms, n=20000 " +
                                            fmt(t2 * 1e3, 2) + "ms, ratio " + fmt(ratio, 2) + " (in [1.5, 3.5])"};
}

Outcome adult_counts() {
  const std::string path = adult_path();
  const auto gender = read_adult(path, AdultGrouping::Gender);
  const auto race = read_adult(path, AdultGrouping::Race);
  const auto all = iota_points(gender.groups.size());
  const auto g = group_counts(gender.groups, all, 2);
  const auto r = group_counts(race.groups, all, 5);
  const bool ok = g == std::vector<std::size_t>{8291, 16709} &&
                  r == std::vector<std::size_t>{21391, 775, 241, 214, 2379};
  std::string detail = std::to_string(all.size()) + " rows; Female " + std::to_string(g[0]) + ", Male " +
                       std::to_string(g[1]) + "; race";
  const auto names = adult_group_names(AdultGrouping::Race);
  for (std::size_t i = 0; i < 5; ++i) detail += " " + names[i] + " " + std::to_string(r[i]);
  return {ok, detail};
}

Outcome adversarial() {
  const double delta = 0.01;
  const auto six = gen_adversarial(AdversarialKind::Fig6, delta);
  const auto seven = gen_adversarial(AdversarialKind::Fig7, delta);
  const FairSolveConfig det{};
  const double cost6 = fair_two_groups(six.instance, det).cost;
  const double opt6 = brute_force_fair(six.instance).opt_value;
  const double cost7 = fair_m_groups(seven.instance, det).cost;
  const double opt7 = brute_force_fair(seven.instance).opt_value;
  const bool certified = std::abs(opt6 - six.optimum) < 1e-12 && std::abs(opt7 - seven.optimum) < 1e-12;
  const double r6 = cost6 / opt6, r7 = cost7 / opt7;
  return {certified && r6 >= 4.5 && r7 >= 7.5,
          "two groups: cost " + fmt(cost6, 4) + " / optimum " + fmt(opt6, 4) + " = " + fmt(r6) + " (>= 4.5); " +
              "three groups: cost " + fmt(cost7, 4) + " / optimum " + fmt(opt7, 4) + " = " + fmt(r7) + " (>= 7.5)"};
}

Outcome determinism() {
  std::vector<std::string> checked;
  const auto same = [&](const std::string& name, const std::function<ExperimentResult()>& run) {
    const bool equal = csv_of(run()) == csv_of(run());
    if (equal) checked.push_back(name);
    return equal;
  };
  ExperimentOptions opts;
  opts.seed = 8;
  opts.trials = 3;
  bool ok = true;
  ok &= same("exp-approx", [&] { return run_exp_approx(opts); });
  ok &= same("exp-grid", [&] { return run_exp_grid(opts, GridStudy{3, 90, {2, 4}}); });
  auto runtime = opts;
  runtime.sizes = {500, 1000};
  ok &= same("exp-runtime", [&] { return run_exp_runtime(runtime); });
  std::vector<std::string> datasets{"er2000"};
  if (std::filesystem::exists(adult_path())) datasets.insert(datasets.end(), {"adult_gender", "adult_race"});
  for (const auto& dataset : datasets) {
    auto o = opts;
    o.trials = 2;
    o.dataset = dataset;
    o.adult_path = adult_path();
    ok &= same("exp-heuristics " + dataset, [&] { return run_exp_heuristics(o); });
    ok &= same("exp-pof " + dataset, [&] { return run_exp_pof(o); });
  }
  std::string detail = "byte-identical CSV on repeat:";
  for (const auto& c : checked) detail += " " + c + ";";
  return {ok, detail};
}

}  // namespace

int main() {
  report("greedy within factor 2 of the unconstrained optimum", greedy_sweep);
  report("two-group algorithm within factor 5, quotas exact", [] { return fair_sweep(true); });
  report("m-group algorithm within factor 3*2^(m-1)-1", [] { return fair_sweep(false); });
  report("approximation factor on n=25 random graphs, 7 settings x 200 trials", approx_study);
  report("planted grid clusters, m = 2..10", grid_study);
  report("exchange keeps closure and quota properties", exchange_runs);
  report("running time roughly linear in n", runtime_scaling);
  report("Adult group counts", adult_counts);
  report("lower-bound families at delta = 0.01", adversarial);
  report("experiment output is deterministic", determinism);
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
