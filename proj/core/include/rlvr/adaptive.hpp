#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "rlvr/distribution.hpp"

namespace rlvr {

/// How M(N) is estimated at each candidate N.
enum class MarginEstimation {
  pilot_average,  // mean over pilot_size independent batches
  single_batch,   // one batch (pilot_size ignored)
};

struct ControllerConfig {
  double m_target = 1e-3;
  std::uint64_t n_initial = 4;
  std::uint64_t n_min = 1;  // shrink floor
  std::uint64_t n_max = 4096;
  double growth_factor = 2.0;
  double shrink_threshold = 4.0;  // shrink when M >= shrink_threshold * m_target
  std::uint64_t pilot_size = 256;
  std::uint64_t max_iterations = 32;
  MarginEstimation estimation = MarginEstimation::pilot_average;

  /// Throws Error(invalid_input) on a violated invariant.
  void validate() const;
};

struct MarginEstimate {
  double mean = 0.0;
  double std_error = 0.0;          // 0 for a single batch
  double negative_fraction = 0.0;  // share of pilot batches with M < 0
  std::uint64_t batches = 0;
};

/// Mean of M(N) over pilot_size independent batches of n i.i.d. draws.
/// Deterministic in (seed, n): pilot batches for a given n always come from
/// the stream derive_seed(seed, pilot, n).
MarginEstimate estimate_margin(const LabeledDistribution& dist, const RewardScheme& rewards,
                               std::uint64_t n, std::uint64_t pilot_size, std::uint64_t seed);

enum class ControllerAction { grow, shrink, hold };

enum class ControllerStatus {
  converged,         // m_target <= M < shrink_threshold * m_target
  above_band,        // M above the band but shrinking would revisit a failing N
  capped,            // M < m_target at n_max
  max_iterations,
};

std::string_view to_string(ControllerAction a) noexcept;
std::string_view to_string(ControllerStatus s) noexcept;

struct ControllerStep {
  std::uint64_t n = 0;
  double estimated_margin = 0.0;
  double std_error = 0.0;
  ControllerAction action = ControllerAction::hold;
};

struct ControllerTrace {
  std::vector<ControllerStep> steps;
  ControllerStatus status = ControllerStatus::max_iterations;
  /// True only if the last estimate reached m_target.
  bool success = false;
};

/// Grow N by growth_factor while M(N) < m_target (capped at n_max); shrink
/// while M(N) >= shrink_threshold * m_target (floored at n_min, never back
/// to an N already seen below target); stop when inside the band.
ControllerTrace run_controller(const LabeledDistribution& dist, const RewardScheme& rewards,
                               const ControllerConfig& config, std::uint64_t seed);

}  // namespace rlvr
