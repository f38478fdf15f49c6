#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rlvr/adaptive.hpp"
#include "rlvr/simulator.hpp"
#include "rlvr/update.hpp"

namespace rlvr {

std::string tool_version();

/// "%.17g": enough digits to round-trip any double.
std::string format_double(double x);

/// UpdateReport as JSON. `config_json` (the resolved scenario) is embedded
/// verbatim under "config".
std::string update_report_json(const UpdateReport& report, const std::string& config_json);

/// Human-readable summary table.
std::string update_report_table(const UpdateReport& report);

std::string controller_trace_json(const ControllerTrace& trace, const ControllerConfig& config,
                                  const std::string& scenario_json, std::uint64_t seed);

/// Long-format trajectory CSV:
///   # <tool version>
///   # config: <resolved config JSON>
///   run_id,n,seed,step,q_pos,fraction_improved,worst_drop
/// Rows are sorted by (n, seed, step); run_id numbers runs in that order.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryMetrics> runs,
                          const std::string& config_json);

struct TrajectoryRow {
  std::size_t run_id = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t step = 0;
  double q_pos = 0.0;
  double fraction_improved = 0.0;
  double worst_drop = 0.0;
  friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

/// Reads what write_trajectory_csv wrote (comment lines skipped).
/// Throws Error(parse_error) on a schema mismatch.
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

struct LemmaCheckRow {
  double p = 0.0;
  std::uint64_t n = 0;
  double analytic = 0.0;
  double monte_carlo = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  bool within_3se = false;
};

std::vector<LemmaCheckRow> lemma_check(std::span<const double> p_grid,
                                       std::span<const std::uint64_t> n_grid,
                                       std::uint64_t trials, std::uint64_t seed);

void write_lemma_csv(std::ostream& out, std::span<const LemmaCheckRow> rows,
                     const std::string& config_json);

}  // namespace rlvr
