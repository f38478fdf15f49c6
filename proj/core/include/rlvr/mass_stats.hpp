#pragma once

#include <cstdint>
#include <span>

#include "rlvr/batch.hpp"
#include "rlvr/distribution.hpp"

namespace rlvr {

/// First and second moments of p over the partition induced by one batch.
///
/// Naming: A = sampled correct, B = sampled incorrect, U = unsampled,
/// "pos"/"neg" = correct/incorrect. P2 is the global second moment; it is
/// reported as a diagnostic only.
struct MassStats {
  double p_pos = 0.0;      // sum_{A} p
  double p_neg = 0.0;      // sum_{B} p
  double p_out = 0.0;      // sum_{U} p
  double p_pos_out = 0.0;  // sum_{U and correct} p
  double p_neg_out = 0.0;  // sum_{U and incorrect} p
  double q_pos = 0.0;      // sum over all correct tokens
  double q_neg = 0.0;      // sum over all incorrect tokens
  double a2 = 0.0;
  double b2 = 0.0;
  double u2 = 0.0;
  double u_pos2 = 0.0;
  double u_neg2 = 0.0;
  double p2 = 0.0;
  double s_r = 0.0;        // R_c * p_pos + R_w * p_neg
};

/// Throws Error(invalid_batch) if the batch references indices outside the
/// vocabulary or disagrees with the correct mask.
MassStats compute_mass_stats(const LabeledDistribution& dist, const RolloutBatch& batch,
                             const RewardScheme& rewards = RewardScheme::binary());

/// Same, with precomputed probabilities (length must equal dist.size()).
MassStats compute_mass_stats(const LabeledDistribution& dist, std::span<const double> p,
                             const RolloutBatch& batch, const RewardScheme& rewards);

/// 1 - (1 - q_pos)^k.
double pass_at_k(double q_pos, std::uint64_t k);

/// 1 - mean_x (1 - q_pos(x))^k over a non-empty list of tasks.
double expected_pass_at_k(std::span<const double> q_pos_list, std::uint64_t k);

}  // namespace rlvr
