// fairkc: solve fair k-center instances, generate instances, run experiments.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairkc/harness.hpp"

namespace {

using namespace fairkc;

int exit_code_for(ErrorCode code) { return is_io_error(code) ? 2 : 1; }

void emit(const std::string& out_path, const ExperimentResult& result) {
  if (out_path.empty()) {
    write_csv(std::cout, result);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + out_path);
  write_csv(out, result);
}

AdultGrouping grouping_from(const std::string& name) {
  if (name == "gender") return AdultGrouping::Gender;
  if (name == "race") return AdultGrouping::Race;
  throw Error(ErrorCode::BadParameters, "grouping must be gender or race");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair k-center clustering: solvers, oracles, generators and experiments"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string out_path;
  std::string adult_path;
  bool deterministic = false;
  bool timings = false;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--out", out_path, "Output file (default: stdout)");
    cmd->add_flag("--deterministic", deterministic, "Break ties and fill quotas by lowest index instead of seeded draws");
  };
  const auto experiment = [&](CLI::App* cmd) {
    common(cmd);
    cmd->add_option("--trials", trials, "Trials per setting");
    cmd->add_option("--adult-path", adult_path, "Path to the UCI Adult data file");
    cmd->add_flag("--timings", timings, "Write wall times (makes output machine dependent)");
  };

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance file and print a JSON report");
  std::string instance_path;
  std::string algorithm = "fairm";
  std::vector<std::size_t> quotas;
  solve->add_option("instance", instance_path, "Instance JSON file")->required();
  solve->add_option("-a,--algorithm", algorithm, "Algorithm")
      ->check(CLI::IsMember(solve_algorithms()));
  solve->add_option("--quotas", quotas, "Override the per-group quotas")->delimiter(',');
  common(solve);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance and write it as JSON");
  std::string kind = "er";
  std::size_t n = 25;
  std::size_t c0_size = 0;
  std::size_t grid_side = 2;
  std::size_t points_total = 40;
  std::size_t groups = 2;
  double delta = 0.01;
  std::string grouping = "gender";
  gen->add_option("--kind", kind, "er | grid | fig6 | fig7 | adult")
      ->check(CLI::IsMember({"er", "grid", "fig6", "fig7", "adult"}));
  gen->add_option("--n", n, "Vertex count (er)");
  gen->add_option("--quotas", quotas, "Per-group quotas (er, adult)")->delimiter(',');
  gen->add_option("--c0", c0_size, "Number of initially given centers (er, adult)");
  gen->add_option("--grid-side", grid_side, "Grid side (grid)");
  gen->add_option("--points", points_total, "Sampled points (grid)");
  gen->add_option("--groups", groups, "Group count (grid)");
  gen->add_option("--delta", delta, "Perturbation in (0, 0.1) (fig6, fig7)");
  gen->add_option("--grouping", grouping, "gender | race (adult)");
  gen->add_option("--adult-path", adult_path, "Path to the UCI Adult data file (adult)");
  common(gen);

  // experiments
  auto* approx = app.add_subcommand("exp-approx", "Approximation factor on n = 25 random graphs, seven settings");
  experiment(approx);
  auto* runtime = app.add_subcommand("exp-runtime", "Running time of the m-group algorithm versus n");
  std::vector<std::size_t> sizes;
  runtime->add_option("--sizes", sizes, "Ascending instance sizes")->delimiter(',');
  experiment(runtime);
  auto* grid = app.add_subcommand("exp-grid", "Approximation factor on planted grid clusters versus m");
  GridStudy study;
  grid->add_option("--grid-side", study.grid_side, "Grid side");
  grid->add_option("--points", study.points_total, "Sampled points");
  grid->add_option("--groups", study.group_counts, "Group counts to sweep")->delimiter(',');
  experiment(grid);
  std::string dataset = "er2000";
  auto* heur = app.add_subcommand("exp-heuristics", "The m-group algorithm against the two baselines");
  auto* pof = app.add_subcommand("exp-pof", "Unconstrained greedy against the m-group algorithm");
  for (auto* cmd : {heur, pof}) {
    cmd->add_option("--dataset", dataset, "er2000 | adult_gender | adult_race")
        ->check(CLI::IsMember({"er2000", "adult_gender", "adult_race"}));
    cmd->add_option("--quotas", quotas, "Override the per-group quotas")->delimiter(',');
    experiment(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ExperimentOptions opts;
    opts.seed = seed;
    opts.trials = trials;
    opts.deterministic = deterministic;
    opts.timings = timings;
    opts.adult_path = adult_path;
    opts.dataset = dataset;
    opts.quotas = quotas;
    opts.sizes = sizes;

    if (solve->parsed()) {
      Instance instance = read_instance(instance_path);
      if (!quotas.empty()) {
        instance.quotas = quotas;
        require_valid(instance);
      }
      const FairSolveConfig config{deterministic ? SelectionMode::Deterministic : SelectionMode::SeededRandom, seed};
      const std::string report = solve_to_json(instance, algorithm, config).dump();
      if (out_path.empty()) {
        std::cout << report << '\n';
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + out_path);
        out << report << '\n';
      }
    } else if (gen->parsed()) {
      Instance instance;
      if (kind == "er") {
        if (quotas.empty()) quotas = {2, 2};
        instance = gen_erdos_renyi(n, quotas.size(), quotas, c0_size, seed);
      } else if (kind == "grid") {
        instance = gen_grid_clusters(grid_side, points_total, groups, seed).instance;
      } else if (kind == "fig6" || kind == "fig7") {
        instance = gen_adversarial(kind == "fig6" ? AdversarialKind::Fig6 : AdversarialKind::Fig7, delta).instance;
      } else {
        const auto g = grouping_from(grouping);
        if (quotas.empty()) quotas = g == AdultGrouping::Gender ? std::vector<std::size_t>{200, 200}
                                                                : std::vector<std::size_t>(5, 50);
        if (adult_path.empty()) throw Error(ErrorCode::FileNotFound, "--kind adult needs --adult-path");
        instance = ingest_adult(adult_path, g, quotas, c0_size, seed);
      }
      if (out_path.empty()) {
        std::cout << instance_to_json(instance).dump() << '\n';
      } else {
        write_instance(instance, out_path);
      }
    } else if (approx->parsed()) {
      emit(out_path, run_exp_approx(opts));
    } else if (runtime->parsed()) {
      emit(out_path, run_exp_runtime(opts));
    } else if (grid->parsed()) {
      emit(out_path, run_exp_grid(opts, study));
    } else if (heur->parsed()) {
      emit(out_path, run_exp_heuristics(opts));
    } else if (pof->parsed()) {
      emit(out_path, run_exp_pof(opts));
    }
  } catch (const Error& e) {
    std::cerr << "fairkc: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return 0;
}
