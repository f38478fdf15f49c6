#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rlvr/adam.hpp"
#include "rlvr/distribution.hpp"

namespace rlvr {

enum class InitMode { zeros, seeded };
enum class OptimizerKind { plain_gradient, adaptive_moments };

/// Advantage baseline subtracted from sampled rewards.
enum class BaselineMode {
  batch_mean,            // b = (1/N) sum_j R_j over the N draws (with multiplicity)
  probability_weighted,  // S_R = R_c P_pos + R_w P_neg over the sampled sets
};

enum class SamplingMode {
  iid,         // N i.i.d. categorical draws
  exhaustive,  // every token exactly once; requires N == vocab_size
};

struct SimulationConfig {
  std::size_t vocab_size = 2048;
  std::size_t num_correct = 128;
  RewardScheme rewards{};
  InitMode init = InitMode::zeros;
  double seeded_correct_logit = 3.0;
  std::optional<std::size_t> anchor_index;
  double anchor_logit = 5.0;
  double temperature = 1.0;
  std::size_t n_rollouts = 64;
  std::size_t steps = 500;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::adaptive_moments;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
  BaselineMode baseline = BaselineMode::batch_mean;
  SamplingMode sampling = SamplingMode::iid;
  std::uint64_t seed = 0;

  /// Throws Error(invalid_input) on a violated invariant.
  void validate() const;

  /// d = 2048, 128 correct, T = 500, AdamW at 1e-3, seeded init with
  /// correct logits 3 and anchor token 0 at 5.
  static SimulationConfig desk_preset();
  /// d = 128000, 10000 correct, T = 1000, N = 51200, otherwise as desk.
  static SimulationConfig large_preset();

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Correct tokens occupy the lowest indices not taken by the anchor.
std::vector<bool> correct_mask_for(const SimulationConfig& config);

/// Step-0 logits for the configured init mode and anchor.
std::vector<double> initial_logits(const SimulationConfig& config);

/// Per-step series, index 0 being the state before any update.
struct TrajectoryMetrics {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> q_pos;
  std::vector<double> fraction_improved;   // correct tokens with p_i(t) > p_i(0)
  std::vector<double> fraction_worsened;   // correct tokens with p_i(t) < p_i(0)
  std::vector<double> worst_drop;          // min(0, min_i p_i(t) - p_i(0)) over correct
  bool diverged = false;

  /// Deepest worst_drop over the whole trajectory (<= 0).
  double deepest_drop() const noexcept;

  std::size_t size() const noexcept { return q_pos.size(); }
  friend bool operator==(const TrajectoryMetrics&, const TrajectoryMetrics&) = default;
};

TrajectoryMetrics run_simulation(const SimulationConfig& config);

/// One trajectory per (n, seed), ordered by n then seed (input order of each
/// list). With parallel set, runs are distributed over worker threads; the
/// result order does not depend on it.
std::vector<TrajectoryMetrics> sweep_rollout_sizes(const SimulationConfig& base,
                                                   std::span<const std::size_t> n_list,
                                                   std::span<const std::uint64_t> seeds,
                                                   bool parallel = false);

std::string_view to_string(InitMode m) noexcept;
std::string_view to_string(OptimizerKind k) noexcept;
std::string_view to_string(BaselineMode b) noexcept;
std::string_view to_string(SamplingMode s) noexcept;

}  // namespace rlvr
