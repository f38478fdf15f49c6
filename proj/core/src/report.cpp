#include "rlvr/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rlvr/error.hpp"
#include "rlvr/sampling.hpp"

#ifndef RLVR_VERSION_STRING
#define RLVR_VERSION_STRING "0.0.0"
#endif

namespace rlvr {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view name(PositivityOutcome o) {
  switch (o) {
    case PositivityOutcome::positive: return "positive";
    case PositivityOutcome::boundary: return "boundary";
    case PositivityOutcome::negative: return "negative";
  }
  return "boundary";
}

std::string_view name(BatchScenario s) {
  switch (s) {
    case BatchScenario::fully_sampled: return "fully_sampled";
    case BatchScenario::balanced: return "balanced";
    case BatchScenario::reward_positive: return "reward_positive";
    case BatchScenario::reward_negative: return "reward_negative";
  }
  return "balanced";
}

std::string_view name(GuaranteeClause c) {
  switch (c) {
    case GuaranteeClause::in_batch_curvature: return "in_batch_curvature";
    case GuaranteeClause::coupling_aids: return "coupling_aids";
    case GuaranteeClause::curvature_dominates: return "curvature_dominates";
    case GuaranteeClause::none: return "none";
  }
  return "none";
}

ordered_json embedded(const std::string& config_json) {
  if (config_json.empty()) return nullptr;
  return ordered_json::parse(config_json);
}

std::string one_line(const std::string& config_json) {
  return config_json.empty() ? "{}" : ordered_json::parse(config_json).dump();
}

}  // namespace

std::string tool_version() { return std::string("rlvr-mass ") + RLVR_VERSION_STRING; }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string update_report_json(const UpdateReport& r, const std::string& config_json) {
  const auto& s = r.stats;
  ordered_json j;
  j["tool_version"] = tool_version();
  j["config"] = embedded(config_json);
  j["eta"] = r.eta;
  j["n"] = r.n;
  j["mass_stats"] = {{"P_pos", s.p_pos},   {"P_neg", s.p_neg},   {"P_out", s.p_out},
                     {"P_pos_out", s.p_pos_out}, {"P_neg_out", s.p_neg_out},
                     {"Q_pos", s.q_pos},   {"Q_neg", s.q_neg},   {"A2", s.a2},
                     {"B2", s.b2},         {"U2", s.u2},         {"U_pos2", s.u_pos2},
                     {"U_neg2", s.u_neg2}, {"P2", s.p2},         {"S_R", s.s_r}};
  j["delta_z"] = r.delta_z;
  j["delta_p_first_order"] = r.delta_p_first_order;
  j["delta_q_closed_form"] = r.closed_form.total;
  j["delta_q_jacobian_oracle"] = r.delta_q_jacobian;
  j["delta_q_exact_resoftmax"] = r.delta_q_exact;
  j["term_in_batch_correct"] = r.closed_form.in_batch_correct;
  j["term_in_batch_incorrect"] = r.closed_form.in_batch_incorrect;
  j["term_unsampled_coupling"] = r.closed_form.unsampled_coupling;
  if (r.decomposition) {
    j["delta_p_in"] = r.decomposition->delta_p_in;
    j["delta_p_out"] = r.decomposition->delta_p_out;
  } else {
    j["delta_p_in"] = nullptr;
    j["delta_p_out"] = nullptr;
  }
  j["margin"] = r.margin;
  j["positivity"] = {{"is_guaranteed_positive", r.verdict.is_guaranteed_positive},
                     {"outcome", name(r.verdict.outcome)},
                     {"scenario", name(r.verdict.scenario)},
                     {"clause", name(r.verdict.clause)},
                     {"condition_lhs", r.verdict.condition_lhs},
                     {"condition_rhs", r.verdict.condition_rhs}};
  j["cauchy_schwarz_sufficient"] =
      r.cauchy_schwarz ? ordered_json(*r.cauchy_schwarz) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

std::string update_report_table(const UpdateReport& r) {
  std::ostringstream os;
  auto row = [&os](const char* label, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-26s % .10e\n", label, v);
    os << buf;
  };
  const auto& s = r.stats;
  os << "one-step update (eta = " << format_double(r.eta) << ", N = " << r.n << ")\n";
  os << "masses\n";
  row("Q_pos", s.q_pos);
  row("Q_neg", s.q_neg);
  row("P_pos", s.p_pos);
  row("P_neg", s.p_neg);
  row("P_pos_out", s.p_pos_out);
  row("P_neg_out", s.p_neg_out);
  row("S_R", s.s_r);
  os << "second moments\n";
  row("A2", s.a2);
  row("B2", s.b2);
  row("U_pos2", s.u_pos2);
  row("U_neg2", s.u_neg2);
  row("P2", s.p2);
  os << "correct-mass change\n";
  row("in-batch correct", r.closed_form.in_batch_correct);
  row("in-batch incorrect", r.closed_form.in_batch_incorrect);
  row("unsampled coupling", r.closed_form.unsampled_coupling);
  row("closed form", r.closed_form.total);
  row("jacobian oracle", r.delta_q_jacobian);
  row("exact re-softmax", r.delta_q_exact);
  if (r.decomposition) {
    row("delta p in", r.decomposition->delta_p_in);
    row("delta p out", r.decomposition->delta_p_out);
  }
  row("margin M(N)", r.margin);
  os << "verdict: " << name(r.verdict.outcome) << " (" << name(r.verdict.scenario) << ", "
     << name(r.verdict.clause) << ")";
  if (r.cauchy_schwarz) {
    os << "; cauchy-schwarz certificate: " << (*r.cauchy_schwarz ? "yes" : "no");
  }
  os << "\n";
  return os.str();
}

std::string controller_trace_json(const ControllerTrace& trace, const ControllerConfig& c,
                                  const std::string& scenario_json, std::uint64_t seed) {
  ordered_json j;
  j["tool_version"] = tool_version();
  j["config"] = embedded(scenario_json);
  j["controller"] = {{"m_target", c.m_target},
                     {"n_initial", c.n_initial},
                     {"n_min", c.n_min},
                     {"n_max", c.n_max},
                     {"growth_factor", c.growth_factor},
                     {"shrink_threshold", c.shrink_threshold},
                     {"pilot_size", c.pilot_size},
                     {"max_iterations", c.max_iterations},
                     {"estimation", c.estimation == MarginEstimation::pilot_average
                                        ? "pilot_average"
                                        : "single_batch"},
                     {"seed", seed}};
  ordered_json steps = ordered_json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"n", s.n},
                     {"estimated_margin", s.estimated_margin},
                     {"std_error", s.std_error},
                     {"action", to_string(s.action)}});
  }
  j["steps"] = steps;
  j["status"] = to_string(trace.status);
  j["success"] = trace.success;
  return j.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryMetrics> runs,
                          const std::string& config_json) {
  std::vector<std::size_t> order(runs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (runs[a].n != runs[b].n) return runs[a].n < runs[b].n;
    return runs[a].seed < runs[b].seed;
  });

  out << "# " << tool_version() << "\n";
  out << "# config: " << one_line(config_json) << "\n";
  for (std::size_t id = 0; id < order.size(); ++id) {
    if (runs[order[id]].diverged) out << "# diverged: run_id=" << id << "\n";
  }
  out << "run_id,n,seed,step,q_pos,fraction_improved,worst_drop\n";
  for (std::size_t id = 0; id < order.size(); ++id) {
    const auto& m = runs[order[id]];
    for (std::size_t t = 0; t < m.size(); ++t) {
      out << id << ',' << m.n << ',' << m.seed << ',' << t << ',' << format_double(m.q_pos[t])
          << ',' << format_double(m.fraction_improved[t]) << ','
          << format_double(m.worst_drop[t]) << '\n';
    }
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  static const std::string kHeader = "run_id,n,seed,step,q_pos,fraction_improved,worst_drop";
  std::vector<TrajectoryRow> rows;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw Error(ErrorCode::parse_error, "trajectory CSV: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream fields(line);
    std::string cell[7];
    for (int k = 0; k < 7; ++k) {
      if (!std::getline(fields, cell[k], ',')) {
        throw Error(ErrorCode::parse_error,
                    "trajectory CSV: line " + std::to_string(line_no) + " has too few columns");
      }
    }
    try {
      TrajectoryRow r;
      r.run_id = std::stoull(cell[0]);
      r.n = std::stoull(cell[1]);
      r.seed = std::stoull(cell[2]);
      r.step = std::stoull(cell[3]);
      r.q_pos = std::stod(cell[4]);
      r.fraction_improved = std::stod(cell[5]);
      r.worst_drop = std::stod(cell[6]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error,
                  "trajectory CSV: malformed number on line " + std::to_string(line_no));
    }
  }
  if (!header_seen) throw Error(ErrorCode::parse_error, "trajectory CSV: missing header");
  return rows;
}

std::vector<LemmaCheckRow> lemma_check(std::span<const double> p_grid,
                                       std::span<const std::uint64_t> n_grid,
                                       std::uint64_t trials, std::uint64_t seed) {
  std::vector<LemmaCheckRow> rows;
  std::uint64_t cell = 0;
  for (double p : p_grid) {
    for (std::uint64_t n : n_grid) {
      LemmaCheckRow row;
      row.p = p;
      row.n = n;
      row.trials = trials;
      row.analytic = expected_unsampled_second_moment(p, n);
      const auto mc = monte_carlo_unsampled_second_moment(p, n, trials, seed + cell++);
      row.monte_carlo = mc.mean;
      row.std_error = mc.std_error;
      row.within_3se = std::abs(mc.mean - row.analytic) <= 3.0 * mc.std_error;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_lemma_csv(std::ostream& out, std::span<const LemmaCheckRow> rows,
                     const std::string& config_json) {
  out << "# " << tool_version() << "\n";
  out << "# config: " << one_line(config_json) << "\n";
  out << "p,n,analytic,monte_carlo,std_error,trials,within_3se\n";
  for (const auto& r : rows) {
    out << format_double(r.p) << ',' << r.n << ',' << format_double(r.analytic) << ','
        << format_double(r.monte_carlo) << ',' << format_double(r.std_error) << ',' << r.trials
        << ',' << (r.within_3se ? "true" : "false") << '\n';
  }
}

}  // namespace rlvr
