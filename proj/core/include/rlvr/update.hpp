#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rlvr/batch.hpp"
#include "rlvr/distribution.hpp"
#include "rlvr/mass_stats.hpp"

namespace rlvr {

// One-step analysis of the linear RLVR surrogate
//
//   L(z) = -(1/N) sum_i R_i p_i,   R_i in {R_c on A, R_w on B, 0 on U},
//
// under a plain gradient step of size eta. All operations act on the
// effective logits z / tau, so the closed forms hold for any temperature.

/// Delta z_j = (eta / N) p_j (R_j - S_R).
std::vector<double> logit_step(const LabeledDistribution& dist, const RolloutBatch& batch,
                               const RewardScheme& rewards, double eta);

/// First-order probability change Delta p_i = p_i (Delta z_i - sum_j p_j Delta z_j).
std::vector<double> first_order_delta_p(const LabeledDistribution& dist,
                                        std::span<const double> delta_z);
std::vector<double> first_order_delta_p(std::span<const double> p,
                                        std::span<const double> delta_z);

/// Closed-form change of correct mass, term by term (each already scaled by eta/N).
struct ClosedFormDelta {
  double in_batch_correct = 0.0;    // (R_c - S_R) Q_neg A2
  double in_batch_incorrect = 0.0;  // (S_R - R_w) Q_pos B2
  double unsampled_coupling = 0.0;  // S_R (Q_pos U_neg2 - Q_neg U_pos2)
  double total = 0.0;
};

ClosedFormDelta delta_q_closed_form(const MassStats& stats, const RewardScheme& rewards,
                                    double eta, std::size_t n);

/// Unscaled margin M(N); equals delta_q_closed_form(...).total * N / eta.
double margin(const MassStats& stats, const RewardScheme& rewards);

/// Split of the correct-mass change into sampled-correct tokens (in) and
/// unsampled-correct tokens (out). Defined for R_c = +1, R_w = -1 only;
/// other schemes throw Error(unsupported_reward).
struct MassDecomposition {
  double delta_p_in = 0.0;
  double delta_p_out = 0.0;
};

MassDecomposition delta_p_decomposition(const MassStats& stats, const RewardScheme& rewards,
                                        double eta, std::size_t n);
MassDecomposition delta_p_decomposition(const LabeledDistribution& dist,
                                        const RolloutBatch& batch, const RewardScheme& rewards,
                                        double eta);

/// sum_{correct} softmax(u + dz) - sum_{correct} softmax(u), u = z / tau.
/// Small steps use an expm1 form that avoids cancellation against 1.
double exact_resoftmax_delta_q(const LabeledDistribution& dist,
                               std::span<const double> delta_z);

enum class PositivityOutcome { positive, boundary, negative };

enum class BatchScenario { fully_sampled, balanced, reward_positive, reward_negative };

/// Which clause produced the verdict.
enum class GuaranteeClause {
  in_batch_curvature,   // fully sampled or balanced, curvature > 0
  coupling_aids,        // coupling term is non-negative and curvature > 0
  curvature_dominates,  // coupling hurts but curvature outweighs it
  none,                 // zero or negative change
};

struct PositivityVerdict {
  bool is_guaranteed_positive = false;
  PositivityOutcome outcome = PositivityOutcome::boundary;
  BatchScenario scenario = BatchScenario::balanced;
  GuaranteeClause clause = GuaranteeClause::none;
  double condition_lhs = 0.0;  // (R_c - S_R) Q_neg A2 + (S_R - R_w) Q_pos B2
  double condition_rhs = 0.0;  // S_R (Q_neg U_pos2 - Q_pos U_neg2)
};

/// Absolute band around lhs == rhs reported as PositivityOutcome::boundary.
inline constexpr double kBoundaryTolerance = 1e-14;

PositivityVerdict positivity_condition(const MassStats& stats, const RewardScheme& rewards);

/// Conservative test that bounds U_pos2 <= P_pos_out^2 and U_neg2 <= P_neg_out^2.
/// Returns true only if the bound certifies a strictly positive change.
/// Binary rewards only.
bool cauchy_schwarz_sufficient(const MassStats& stats, const RewardScheme& rewards);

/// Everything about one update in one place.
struct UpdateReport {
  MassStats stats;
  std::vector<double> delta_z;
  std::vector<double> delta_p_first_order;
  ClosedFormDelta closed_form;
  double delta_q_jacobian = 0.0;  // sum over correct tokens of delta_p_first_order
  double delta_q_exact = 0.0;     // exact re-softmax
  std::optional<MassDecomposition> decomposition;  // binary rewards only
  double margin = 0.0;
  PositivityVerdict verdict;
  std::optional<bool> cauchy_schwarz;  // binary rewards only
  double eta = 0.0;
  std::size_t n = 0;
};

UpdateReport analyze_update(const LabeledDistribution& dist, const RolloutBatch& batch,
                            const RewardScheme& rewards, double eta);

}  // namespace rlvr
