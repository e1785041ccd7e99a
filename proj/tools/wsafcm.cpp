#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsafcm/experiment.hpp"
#include "wsafcm/metrics.hpp"
#include "wsafcm/trace_io.hpp"

namespace {

using namespace wsafcm;

struct CommonFlags {
  std::string config_path;
  std::optional<int> nodes;
  std::optional<std::string> clusters;  // integer or "auto"
  std::optional<int> rounds;
  std::optional<int> recluster_every;
  std::optional<std::string> seeds;
  std::optional<std::string> out_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config file");
  cmd->add_option("--nodes", flags.nodes, "Override node count");
  cmd->add_option("--clusters", flags.clusters, "Override cluster count (integer or 'auto')");
  cmd->add_option("--rounds", flags.rounds, "Override the round cap");
  cmd->add_option("--recluster-every", flags.recluster_every,
                  "Rounds between clustering refreshes");
  cmd->add_option("--seeds", flags.seeds, "Seed list as 'a..b' or a single integer");
  cmd->add_option("--out", flags.out_dir, "Output directory");
}

ExperimentSpec build_spec(const CommonFlags& flags) {
  ExperimentSpec spec;
  if (!flags.config_path.empty()) spec = load_spec(flags.config_path);
  if (flags.nodes) spec.network.node_count = *flags.nodes;
  if (flags.clusters) {
    if (*flags.clusters == "auto") {
      spec.network.cluster_count = 0;
    } else {
      try {
        spec.network.cluster_count = std::stoi(*flags.clusters);
      } catch (const std::exception&) {
        throw std::invalid_argument("cluster_count: expected an integer or 'auto', got '" +
                                    *flags.clusters + "'");
      }
    }
  }
  if (flags.rounds) spec.protocol.round_cap = *flags.rounds;
  if (flags.recluster_every) spec.protocol.recluster_period = *flags.recluster_every;
  if (flags.seeds) spec.seeds = parse_seed_range(*flags.seeds);
  if (flags.out_dir) spec.out_dir = *flags.out_dir;
  return spec;
}

int cmd_run(const CommonFlags& flags, const std::string& strategy_text, std::uint64_t seed) {
  ExperimentSpec spec = build_spec(flags);
  const Strategy strategy = strategy_from_name(strategy_text);
  const SimulationTrace trace = run_single(spec, strategy, seed);
  const RunSummary summary = summarize(trace, spec.residual_checkpoints);

  const std::string stem = strategy_name(strategy) + "_seed" + std::to_string(seed);
  const auto csv_path = spec.out_dir / ("trace_" + stem + ".csv");
  const auto json_path = spec.out_dir / ("run_" + stem + ".json");
  write_trace_csv(trace, csv_path);
  write_run_summary_json(summary, json_path);
  std::cout << "wrote " << csv_path.string() << "\n";
  std::cout << "wrote " << json_path.string() << "\n";
  if (!trace.first_round_wsa_curve.empty()) {
    const auto curve_path = spec.out_dir / ("curve_" + stem + ".csv");
    write_wsa_curve_csv(trace.first_round_wsa_curve, curve_path);
    std::cout << "wrote " << curve_path.string() << "\n";
  }
  return 0;
}

int cmd_compare(const CommonFlags& flags, const std::vector<std::string>& strategy_names) {
  ExperimentSpec spec = build_spec(flags);
  if (!strategy_names.empty()) {
    spec.strategies.clear();
    for (const std::string& name : strategy_names)
      spec.strategies.push_back(strategy_from_name(name));
  }
  const ComparisonReport report = compare(spec);
  const auto path = spec.out_dir / "comparison.json";
  write_comparison_json(report, path);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::vector<int>& sizes, int repetitions) {
  ExperimentSpec spec = build_spec(flags);
  const std::vector<SweepRow> rows = sweep(spec, sizes, repetitions);
  const auto path = spec.out_dir / "sweep.csv";
  write_sweep_csv(rows, path);
  std::cout << "wrote " << path.string() << "\n";
  for (const SweepRow& row : rows)
    std::cout << "n=" << row.n << " k=" << row.k << " ms_per_round=" << row.ms_per_round
              << " scaling=" << row.scaling_factor << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-based WSN clustering simulator (WSA-FCM and baselines)"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string strategy_text = "wsa-fcm";
  std::uint64_t seed = 1;
  std::vector<std::string> compare_strategies;
  std::vector<int> sizes{200, 400, 800};
  int repetitions = 5;

  CLI::App* run = app.add_subcommand("run", "Simulate one (strategy, seed) and write its trace");
  add_common_flags(run, flags);
  run->add_option("--strategy", strategy_text, "wsa-fcm, fcm-only or random");
  run->add_option("--seed", seed, "Run seed");

  CLI::App* cmp = app.add_subcommand("compare", "Run all (strategy, seed) pairs and compare");
  add_common_flags(cmp, flags);
  cmp->add_option("--strategy", compare_strategies, "Strategies to compare (repeatable)");

  CLI::App* swp = app.add_subcommand("sweep", "Time one clustering round across network sizes");
  add_common_flags(swp, flags);
  swp->add_option("--sizes", sizes, "Network sizes to sweep");
  swp->add_option("--reps", repetitions, "Timed repetitions per size");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(flags, strategy_text, seed);
    if (cmp->parsed()) return cmd_compare(flags, compare_strategies);
    if (swp->parsed()) return cmd_sweep(flags, sizes, repetitions);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 2;
  }
}
