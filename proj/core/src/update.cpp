#include "rlvr/update.hpp"

#include <algorithm>
#include <cmath>

#include "rlvr/error.hpp"
#include "rlvr/summation.hpp"

namespace rlvr {

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::invalid_input, "learning rate must be positive and finite");
  }
}

void require_binary(const RewardScheme& rewards, const char* what) {
  if (!rewards.is_binary()) {
    throw Error(ErrorCode::unsupported_reward,
                std::string(what) + " is defined only for rewards R_c = +1, R_w = -1");
  }
}

double sum_over_correct(const LabeledDistribution& dist, std::span<const double> values) {
  std::vector<double> picked;
  picked.reserve(dist.num_correct());
  const auto& mask = dist.correct_mask();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i]) picked.push_back(values[i]);
  }
  return pairwise_sum(picked);
}

struct UnscaledTerms {
  double correct;
  double incorrect;
  double coupling;
};

UnscaledTerms unscaled_terms(const MassStats& s, const RewardScheme& r) {
  return {(r.correct - s.s_r) * s.q_neg * s.a2, (s.s_r - r.incorrect) * s.q_pos * s.b2,
          s.s_r * (s.q_pos * s.u_neg2 - s.q_neg * s.u_pos2)};
}

}  // namespace

std::vector<double> logit_step(const LabeledDistribution& dist, const RolloutBatch& batch,
                               const RewardScheme& rewards, double eta) {
  check_eta(eta);
  rewards.validate();
  const auto p = dist.probabilities();
  const auto stats = compute_mass_stats(dist, p, batch, rewards);
  const double scale = eta / static_cast<double>(batch.draw_count());

  std::vector<double> reward(dist.size(), 0.0);
  for (std::size_t i : batch.sampled_correct()) reward[i] = rewards.correct;
  for (std::size_t i : batch.sampled_incorrect()) reward[i] = rewards.incorrect;

  std::vector<double> dz(dist.size());
  for (std::size_t j = 0; j < dz.size(); ++j) {
    dz[j] = scale * p[j] * (reward[j] - stats.s_r);
  }
  return dz;
}

std::vector<double> first_order_delta_p(const LabeledDistribution& dist,
                                        std::span<const double> delta_z) {
  const auto p = dist.probabilities();
  return first_order_delta_p(p, delta_z);
}

std::vector<double> first_order_delta_p(std::span<const double> p,
                                        std::span<const double> delta_z) {
  if (p.size() != delta_z.size()) {
    throw Error(ErrorCode::invalid_input, "first_order_delta_p: length mismatch");
  }
  const double mean_shift = pairwise_dot(p, delta_z);
  std::vector<double> dp(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) dp[i] = p[i] * (delta_z[i] - mean_shift);
  return dp;
}

ClosedFormDelta delta_q_closed_form(const MassStats& stats, const RewardScheme& rewards,
                                    double eta, std::size_t n) {
  check_eta(eta);
  if (n == 0) throw Error(ErrorCode::invalid_input, "N must be positive");
  const double scale = eta / static_cast<double>(n);
  const auto t = unscaled_terms(stats, rewards);
  ClosedFormDelta out;
  out.in_batch_correct = scale * t.correct;
  out.in_batch_incorrect = scale * t.incorrect;
  out.unsampled_coupling = scale * t.coupling;
  out.total = out.in_batch_correct + out.in_batch_incorrect + out.unsampled_coupling;
  return out;
}

double margin(const MassStats& stats, const RewardScheme& rewards) {
  const auto t = unscaled_terms(stats, rewards);
  return t.correct + t.incorrect + t.coupling;
}

MassDecomposition delta_p_decomposition(const MassStats& s, const RewardScheme& rewards,
                                        double eta, std::size_t n) {
  require_binary(rewards, "the in/out decomposition");
  check_eta(eta);
  if (n == 0) throw Error(ErrorCode::invalid_input, "N must be positive");
  const double scale = eta / static_cast<double>(n);
  const double sr = s.s_r;
  MassDecomposition d;
  d.delta_p_in = scale * ((1.0 - sr) * (1.0 - s.p_pos) * s.a2 + (1.0 + sr) * s.p_pos * s.b2 +
                          sr * s.p_pos * s.u2);
  d.delta_p_out = scale * (-sr * s.u_pos2 - (1.0 - sr) * s.p_pos_out * s.a2 +
                           (1.0 + sr) * s.p_pos_out * s.b2 + sr * s.p_pos_out * s.u2);
  return d;
}

MassDecomposition delta_p_decomposition(const LabeledDistribution& dist,
                                        const RolloutBatch& batch, const RewardScheme& rewards,
                                        double eta) {
  require_binary(rewards, "the in/out decomposition");
  const auto stats = compute_mass_stats(dist, batch, rewards);
  return delta_p_decomposition(stats, rewards, eta, batch.draw_count());
}

double exact_resoftmax_delta_q(const LabeledDistribution& dist,
                               std::span<const double> delta_z) {
  if (delta_z.size() != dist.size()) {
    throw Error(ErrorCode::invalid_input, "exact_resoftmax_delta_q: length mismatch");
  }
  const auto p = dist.probabilities();
  double max_abs = 0.0;
  for (double d : delta_z) {
    if (!std::isfinite(d)) {
      throw Error(ErrorCode::invalid_input, "exact_resoftmax_delta_q: non-finite step");
    }
    max_abs = std::max(max_abs, std::abs(d));
  }

  if (max_abs >= 1.0) {
    auto shifted = dist.effective_logits();
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += delta_z[i];
    const auto p_new = softmax(shifted, 1.0);
    return sum_over_correct(dist, p_new) - sum_over_correct(dist, p);
  }

  // softmax(u + dz)_i - p_i = p_i (e_i - E) / (1 + E), e_i = expm1(dz_i),
  // E = sum_j p_j e_j. Every term is O(|dz|), so nothing cancels against 1.
  std::vector<double> e(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) e[i] = std::expm1(delta_z[i]);
  const double mean_e = pairwise_dot(p, e) / pairwise_sum(p);
  std::vector<double> diff;
  diff.reserve(dist.num_correct());
  const auto& mask = dist.correct_mask();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (mask[i]) diff.push_back(p[i] * (e[i] - mean_e));
  }
  return pairwise_sum(diff) / (1.0 + mean_e);
}

PositivityVerdict positivity_condition(const MassStats& stats, const RewardScheme& rewards) {
  const auto t = unscaled_terms(stats, rewards);
  PositivityVerdict v;
  v.condition_lhs = t.correct + t.incorrect;
  v.condition_rhs = -t.coupling;

  const double gap = v.condition_lhs - v.condition_rhs;
  if (std::abs(gap) <= kBoundaryTolerance) {
    v.outcome = PositivityOutcome::boundary;
  } else {
    v.outcome = gap > 0.0 ? PositivityOutcome::positive : PositivityOutcome::negative;
  }
  v.is_guaranteed_positive = v.outcome == PositivityOutcome::positive;

  if (stats.u_pos2 == 0.0 && stats.u_neg2 == 0.0) {
    v.scenario = BatchScenario::fully_sampled;
  } else if (std::abs(stats.s_r) <= kBoundaryTolerance) {
    v.scenario = BatchScenario::balanced;
  } else {
    v.scenario = stats.s_r > 0.0 ? BatchScenario::reward_positive
                                 : BatchScenario::reward_negative;
  }

  if (!v.is_guaranteed_positive) {
    v.clause = GuaranteeClause::none;
  } else if (v.scenario == BatchScenario::fully_sampled ||
             v.scenario == BatchScenario::balanced) {
    v.clause = GuaranteeClause::in_batch_curvature;
  } else if (t.coupling >= 0.0) {
    v.clause = GuaranteeClause::coupling_aids;
  } else {
    v.clause = GuaranteeClause::curvature_dominates;
  }
  return v;
}

bool cauchy_schwarz_sufficient(const MassStats& s, const RewardScheme& rewards) {
  require_binary(rewards, "the Cauchy-Schwarz condition");
  const double lhs = (1.0 - s.s_r) * s.q_neg * s.a2 + (1.0 + s.s_r) * s.q_pos * s.b2;
  const double rhs = std::abs(s.s_r) * (s.q_neg * s.p_pos_out * s.p_pos_out +
                                        s.q_pos * s.p_neg_out * s.p_neg_out);
  // Strict: equality is reachable (a single unsampled correct token makes the
  // bound tight) and then the change is exactly zero.
  return lhs > rhs;
}

UpdateReport analyze_update(const LabeledDistribution& dist, const RolloutBatch& batch,
                            const RewardScheme& rewards, double eta) {
  UpdateReport r;
  r.eta = eta;
  r.n = batch.draw_count();
  const auto p = dist.probabilities();
  r.stats = compute_mass_stats(dist, p, batch, rewards);
  r.delta_z = logit_step(dist, batch, rewards, eta);
  r.delta_p_first_order = first_order_delta_p(p, r.delta_z);
  r.closed_form = delta_q_closed_form(r.stats, rewards, eta, r.n);
  r.delta_q_jacobian = sum_over_correct(dist, r.delta_p_first_order);
  r.delta_q_exact = exact_resoftmax_delta_q(dist, r.delta_z);
  r.margin = margin(r.stats, rewards);
  r.verdict = positivity_condition(r.stats, rewards);
  if (rewards.is_binary()) {
    r.decomposition = delta_p_decomposition(r.stats, rewards, eta, r.n);
    r.cauchy_schwarz = cauchy_schwarz_sufficient(r.stats, rewards);
  }
  return r;
}

}  // namespace rlvr
