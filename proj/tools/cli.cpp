#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rlvr/adaptive.hpp"
#include "rlvr/error.hpp"
#include "rlvr/report.hpp"
#include "rlvr/scenario.hpp"
#include "rlvr/simulator.hpp"
#include "rlvr/update.hpp"

namespace rlvr::cli {

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Root seed (overrides the file's seed)");
  cmd->add_option("--out", common.out, "Output file (default: stdout)");
}

/// Relative --out paths land under $RLVR_OUTPUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  namespace fs = std::filesystem;
  const char* dir = std::getenv("RLVR_OUTPUT_DIR");
  if (path.empty() || dir == nullptr || *dir == '\0' || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  const auto resolved = resolve_out(path);
  std::ofstream file(resolved, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::invalid_input, "cannot write '" + resolved + "'");
  file << content;
}

int analyze(const std::string& scenario_path, const Common& common, std::ostream& out,
            std::ostream& err) {
  auto file = parse_scenario(read_text_file(scenario_path));
  if (common.seed) {
    if (auto* sampled = std::get_if<SampledBatch>(&file.batch)) sampled->seed = *common.seed;
  }
  const auto scenario = materialize(file);
  const auto report =
      analyze_update(scenario.dist, scenario.batch, scenario.rewards, scenario.eta);
  const auto json = update_report_json(report, serialize_scenario(file));
  const auto table = update_report_table(report);
  if (common.out.empty()) {
    out << json;
    err << table;
  } else {
    emit(common.out, json, out);
    out << table;
  }
  return kExitOk;
}

SimulationConfig load_config(const std::string& path, const Common& common) {
  auto config = parse_simulation_config(read_text_file(path));
  if (common.seed) config.seed = *common.seed;
  return config;
}

int simulate(const std::string& config_path, const Common& common,
             std::optional<std::size_t> n_override, std::ostream& out, std::ostream& err) {
  auto config = load_config(config_path, common);
  if (n_override) config.n_rollouts = *n_override;
  config.validate();
  const std::vector<TrajectoryMetrics> runs{run_simulation(config)};
  std::ostringstream csv;
  write_trajectory_csv(csv, runs, serialize_simulation_config(config));
  emit(common.out, csv.str(), out);
  if (runs.front().diverged) {
    err << "simulation diverged (non-finite logits)\n";
    return kExitDiverged;
  }
  return kExitOk;
}

int sweep(const std::string& config_path, const Common& common,
          const std::vector<std::size_t>& n_list, std::uint64_t seed_count, bool parallel,
          std::ostream& out, std::ostream& err) {
  auto config = load_config(config_path, common);
  if (seed_count == 0) throw Error(ErrorCode::invalid_input, "--seeds must be positive");
  std::vector<std::uint64_t> seeds(seed_count);
  for (std::uint64_t i = 0; i < seed_count; ++i) seeds[i] = config.seed + i;
  const auto runs = sweep_rollout_sizes(config, n_list, seeds, parallel);

  auto resolved = nlohmann::ordered_json::parse(serialize_simulation_config(config));
  resolved["sweep"] = {{"n", n_list}, {"seeds", seeds}};
  std::ostringstream csv;
  write_trajectory_csv(csv, runs, resolved.dump());
  emit(common.out, csv.str(), out);
  for (const auto& r : runs) {
    if (r.diverged) {
      err << "run n=" << r.n << " seed=" << r.seed << " diverged\n";
      return kExitDiverged;
    }
  }
  return kExitOk;
}

int lemma(const std::vector<double>& p_grid, const std::vector<std::uint64_t>& n_grid,
          std::uint64_t trials, const Common& common, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = common.seed.value_or(0);
  const auto rows = lemma_check(p_grid, n_grid, trials, seed);
  nlohmann::ordered_json cfg{{"p_grid", p_grid}, {"n_grid", n_grid}, {"trials", trials},
                             {"seed", seed}};
  std::ostringstream csv;
  write_lemma_csv(csv, rows, cfg.dump());
  emit(common.out, csv.str(), out);
  std::size_t failures = 0;
  for (const auto& r : rows) failures += r.within_3se ? 0 : 1;
  if (failures > 0) {
    err << failures << " grid cell(s) outside 3 standard errors\n";
    return kExitValidation;
  }
  return kExitOk;
}

int adaptive(const std::string& scenario_path, ControllerConfig config, bool n_initial_given,
             bool single_batch, const Common& common, std::ostream& out) {
  const auto file = parse_scenario(read_text_file(scenario_path));
  const auto scenario = materialize(file);
  if (!n_initial_given) config.n_initial = file.n;
  if (single_batch) config.estimation = MarginEstimation::single_batch;
  const std::uint64_t seed = common.seed.value_or(0);
  const auto trace = run_controller(scenario.dist, scenario.rewards, config, seed);
  emit(common.out, controller_trace_json(trace, config, serialize_scenario(file), seed), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-step RLVR mass-balance analysis and rollout-size simulator", "rlvr-mass"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  Common common;

  std::string scenario_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "One-step update report for a scenario");
  analyze_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  add_common(analyze_cmd, common);

  std::string config_path;
  std::optional<std::size_t> n_override;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one simulation, emit trajectory CSV");
  simulate_cmd->add_option("config", config_path, "Simulation config file")->required();
  simulate_cmd->add_option("--n", n_override, "Rollout size N (overrides config)");
  add_common(simulate_cmd, common);

  std::vector<std::size_t> n_list{4, 64, 1024};
  std::uint64_t seed_count = 8;
  bool parallel = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Simulations over rollout sizes and seeds");
  sweep_cmd->add_option("config", config_path, "Simulation config file")->required();
  sweep_cmd->add_option("--n", n_list, "Comma-separated rollout sizes")->delimiter(',');
  sweep_cmd->add_option("--seeds", seed_count, "Number of seeds (seed, seed+1, ...)");
  sweep_cmd->add_flag("--parallel", parallel, "Run trajectories on worker threads");
  add_common(sweep_cmd, common);

  std::vector<double> p_grid{0.01, 0.1, 0.3, 0.5, 0.9};
  std::vector<std::uint64_t> n_grid{1, 4, 16, 64};
  std::uint64_t trials = 1000000;
  auto* lemma_cmd =
      app.add_subcommand("lemma-check", "Analytic vs Monte Carlo unsampled second moment");
  lemma_cmd->add_option("--p-grid", p_grid, "Comma-separated token probabilities")
      ->delimiter(',');
  lemma_cmd->add_option("--n-grid", n_grid, "Comma-separated draw counts")->delimiter(',');
  lemma_cmd->add_option("--trials", trials, "Monte Carlo trials per grid cell");
  add_common(lemma_cmd, common);

  ControllerConfig controller;
  bool single_batch = false;
  auto* adaptive_cmd = app.add_subcommand("adaptive", "Adaptive rollout-size controller trace");
  adaptive_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  adaptive_cmd->add_option("--target", controller.m_target, "Target margin m_target")
      ->required();
  auto* n_initial_opt =
      adaptive_cmd->add_option("--n-initial", controller.n_initial, "Initial N (default: scenario n)");
  adaptive_cmd->add_option("--n-min", controller.n_min, "Smallest N a shrink may reach");
  adaptive_cmd->add_option("--n-max", controller.n_max, "Largest N");
  adaptive_cmd->add_option("--growth", controller.growth_factor, "Grow/shrink factor");
  adaptive_cmd->add_option("--shrink-threshold", controller.shrink_threshold,
                           "Shrink when M >= threshold * target");
  adaptive_cmd->add_option("--pilot", controller.pilot_size, "Pilot batches per estimate");
  adaptive_cmd->add_option("--max-iterations", controller.max_iterations, "Iteration cap");
  adaptive_cmd->add_flag("--single-batch", single_batch, "Estimate M(N) from one batch");
  add_common(adaptive_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return analyze(scenario_path, common, out, err);
    if (simulate_cmd->parsed()) return simulate(config_path, common, n_override, out, err);
    if (sweep_cmd->parsed()) {
      return sweep(config_path, common, n_list, seed_count, parallel, out, err);
    }
    if (lemma_cmd->parsed()) return lemma(p_grid, n_grid, trials, common, out, err);
    if (adaptive_cmd->parsed()) {
      return adaptive(scenario_path, controller, n_initial_opt->count() > 0, single_batch, common,
                      out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::diverged ? kExitDiverged : kExitValidation;
  }
  return kExitUsage;
}

}  // namespace rlvr::cli
