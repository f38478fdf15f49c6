#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "../support/instances.hpp"
#include "../support/oracles.hpp"
#include "../support/scenarios.hpp"
#include "rlvr/error.hpp"
#include "rlvr/mass_stats.hpp"
#include "rlvr/update.hpp"

namespace {

using rlvr::LabeledDistribution;
using rlvr::RewardScheme;
using rlvr::RolloutBatch;

const LabeledDistribution kBalancedDist({0.0, 0.0}, {true, false});
const RolloutBatch kBalancedBatch({0}, {1}, 2);

TEST(LogitStep, BalancedTwoTokenExample) {
  const auto dz = rlvr::logit_step(kBalancedDist, kBalancedBatch, RewardScheme::binary(), 0.1);
  EXPECT_NEAR(dz[0], 0.025, 1e-17);
  EXPECT_NEAR(dz[1], -0.025, 1e-17);
}

TEST(LogitStep, EmptyBatchDoesNotMove) {
  const LabeledDistribution d({0.3, 1.0, -2.0}, {true, false, true});
  const auto dz = rlvr::logit_step(d, RolloutBatch({}, {}, 5), RewardScheme::binary(), 0.5);
  for (double x : dz) EXPECT_EQ(x, 0.0);
}

TEST(LogitStep, EqualsNegativeGradientOfSurrogate) {
  rlvr::Rng rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = testing_support::random_instance(64, rng);
    const RewardScheme rewards{1.5 * rlvr::uniform01(rng), -1.5 * rlvr::uniform01(rng) - 0.01};
    const auto dz = rlvr::logit_step(in.dist(), in.batch(), rewards, 0.05);
    const auto ref = oracle::first_order(in.logits, in.temperature, in.mask, in.sampled_correct,
                                         in.sampled_incorrect, in.n, 0.05, rewards.correct,
                                         rewards.incorrect);
    for (std::size_t j = 0; j < dz.size(); ++j) {
      EXPECT_TRUE(oracle::close(dz[j], ref.delta_z[j], 1e-12, 1e-18)) << j;
    }
  }
}

TEST(FirstOrderDeltaP, NullAndUniformStepsDoNothing) {
  const LabeledDistribution d({0.1, 0.7, -0.4, 2.0}, {true, false, false, true});
  for (double x : rlvr::first_order_delta_p(d, std::vector<double>(4, 0.0))) EXPECT_EQ(x, 0.0);
  for (double x : rlvr::first_order_delta_p(d, std::vector<double>(4, 0.37))) {
    EXPECT_NEAR(x, 0.0, 1e-12);
  }
  EXPECT_THROW(rlvr::first_order_delta_p(d, std::vector<double>(3, 0.0)), rlvr::Error);
}

TEST(FirstOrderDeltaP, MatchesDoubleLoopAndConservesMass) {
  rlvr::Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> z(32), dz(32);
    for (auto& x : z) x = 4.0 * rlvr::uniform01(rng) - 2.0;
    for (auto& x : dz) x = 0.02 * rlvr::uniform01(rng) - 0.01;
    const auto p = rlvr::softmax(z);
    const auto dp = rlvr::first_order_delta_p(p, dz);
    double total = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      long double ref = 0;
      for (std::size_t j = 0; j < 32; ++j) {
        ref += static_cast<long double>(p[i]) * ((i == j ? 1 : 0) - p[j]) * dz[j];
      }
      EXPECT_TRUE(oracle::close(dp[i], ref, 1e-11, 1e-18)) << i;
      total += dp[i];
    }
    EXPECT_NEAR(total, 0.0, 1e-12);
  }
}

TEST(ClosedForm, BalancedTwoTokenExample) {
  const auto s = rlvr::compute_mass_stats(kBalancedDist, kBalancedBatch);
  const auto cf = rlvr::delta_q_closed_form(s, RewardScheme::binary(), 0.1, 2);
  EXPECT_NEAR(cf.total, 0.0125, 1e-17);
  EXPECT_NEAR(cf.in_batch_correct, 0.00625, 1e-17);
  EXPECT_NEAR(cf.in_batch_incorrect, 0.00625, 1e-17);
  EXPECT_EQ(cf.unsampled_coupling, 0.0);
  EXPECT_NEAR(rlvr::margin(s, RewardScheme::binary()), 0.25, 1e-15);
}

TEST(ClosedForm, ZeroCurvatureGivesZero) {
  rlvr::MassStats s;
  s.q_pos = 0.3;
  s.q_neg = 0.7;
  s.u_pos2 = 0.01;
  s.u_neg2 = 0.2;
  EXPECT_EQ(rlvr::delta_q_closed_form(s, RewardScheme::binary(), 0.1, 4).total, 0.0);
  EXPECT_EQ(rlvr::margin(rlvr::MassStats{}, RewardScheme::binary()), 0.0);
}

TEST(ClosedForm, MatchesJacobianOracleOnRandomInstances) {
  rlvr::Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = testing_support::random_instance(64, rng);
    const bool general = trial % 2 == 1;
    const RewardScheme rewards =
        general ? RewardScheme{2.0 * rlvr::uniform01(rng), -2.0 * rlvr::uniform01(rng) - 1e-3}
                : RewardScheme::binary();
    const double eta = 0.01;
    const auto s = rlvr::compute_mass_stats(in.dist(), in.batch(), rewards);
    const auto cf = rlvr::delta_q_closed_form(s, rewards, eta, in.n);
    const auto ref = oracle::first_order(in.logits, in.temperature, in.mask, in.sampled_correct,
                                         in.sampled_incorrect, in.n, eta, rewards.correct,
                                         rewards.incorrect);
    EXPECT_TRUE(oracle::close(cf.total, ref.delta_q, 1e-12, 1e-16))
        << cf.total << " vs " << static_cast<double>(ref.delta_q);
    const double m = rlvr::margin(s, rewards);
    EXPECT_NEAR(m, cf.total * static_cast<double>(in.n) / eta, 1e-12 * std::fabs(m) + 1e-16);
    EXPECT_GE(cf.in_batch_correct, 0.0);
    EXPECT_GE(cf.in_batch_incorrect, 0.0);
  }
}

TEST(ClosedForm, ScalesExactlyWithEta) {
  rlvr::Rng rng(8);
  const auto in = testing_support::random_instance(40, rng);
  const auto d = in.dist();
  const auto b = in.batch();
  const auto r1 = rlvr::analyze_update(d, b, RewardScheme::binary(), 0.01);
  const auto r2 = rlvr::analyze_update(d, b, RewardScheme::binary(), 0.02);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(r2.delta_z[i], 2.0 * r1.delta_z[i]);
    EXPECT_EQ(r2.delta_p_first_order[i], 2.0 * r1.delta_p_first_order[i]);
  }
  EXPECT_EQ(r2.closed_form.total, 2.0 * r1.closed_form.total);
  EXPECT_EQ(r2.closed_form.in_batch_correct, 2.0 * r1.closed_form.in_batch_correct);
  EXPECT_EQ(r2.closed_form.in_batch_incorrect, 2.0 * r1.closed_form.in_batch_incorrect);
  EXPECT_EQ(r2.closed_form.unsampled_coupling, 2.0 * r1.closed_form.unsampled_coupling);
  EXPECT_EQ(r2.margin, r1.margin);
}

TEST(Decomposition, BalancedTwoTokenExample) {
  const auto m = rlvr::delta_p_decomposition(kBalancedDist, kBalancedBatch,
                                             RewardScheme::binary(), 0.1);
  EXPECT_NEAR(m.delta_p_in, 0.0125, 1e-17);
  EXPECT_NEAR(m.delta_p_out, 0.0, 1e-18);
}

TEST(Decomposition, FullySampledHasNoOutsideChange) {
  const auto c = testing_support::fully_sampled();
  const auto m = rlvr::delta_p_decomposition(c.dist, c.batch, RewardScheme::binary(), 0.1);
  EXPECT_NEAR(m.delta_p_out, 0.0, 1e-18);
}

TEST(Decomposition, MatchesSetRestrictedOracleSums) {
  rlvr::Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = testing_support::random_instance(64, rng);
    const auto s = rlvr::compute_mass_stats(in.dist(), in.batch());
    const auto m = rlvr::delta_p_decomposition(s, RewardScheme::binary(), 0.01, in.n);
    const auto ref = oracle::first_order(in.logits, in.temperature, in.mask, in.sampled_correct,
                                         in.sampled_incorrect, in.n, 0.01);
    EXPECT_TRUE(oracle::close(m.delta_p_in, ref.delta_in, 1e-11, 1e-16));
    EXPECT_TRUE(oracle::close(m.delta_p_out, ref.delta_out, 1e-11, 1e-16));
    const auto cf = rlvr::delta_q_closed_form(s, RewardScheme::binary(), 0.01, in.n);
    EXPECT_NEAR(m.delta_p_in + m.delta_p_out, cf.total, 1e-12);
  }
}

TEST(Decomposition, RejectsNonBinaryRewards) {
  try {
    rlvr::delta_p_decomposition(kBalancedDist, kBalancedBatch, RewardScheme{2.0, -1.0}, 0.1);
    FAIL();
  } catch (const rlvr::Error& e) {
    EXPECT_EQ(e.code(), rlvr::ErrorCode::unsupported_reward);
  }
}

TEST(ExactResoftmax, TrivialSteps) {
  const LabeledDistribution d({0.1, 0.7, -0.4}, {true, false, false});
  EXPECT_EQ(rlvr::exact_resoftmax_delta_q(d, std::vector<double>(3, 0.0)), 0.0);
  EXPECT_NEAR(rlvr::exact_resoftmax_delta_q(d, std::vector<double>(3, 1.3)), 0.0, 1e-12);
}

TEST(ExactResoftmax, MatchesLongDoubleForSmallAndLargeSteps) {
  rlvr::Rng rng(12);
  for (double scale : {1e-6, 1e-2, 0.5, 3.0}) {
    const auto in = testing_support::random_instance(50, rng);
    std::vector<double> dz(50);
    for (auto& x : dz) x = scale * (2.0 * rlvr::uniform01(rng) - 1.0);
    const double got = rlvr::exact_resoftmax_delta_q(in.dist(), dz);
    const auto ref = oracle::exact_delta_q(in.logits, in.temperature, in.mask, dz);
    EXPECT_TRUE(oracle::close(got, ref, 1e-9, 1e-17)) << scale;
  }
}

TEST(ExactResoftmax, GapShrinksQuadratically) {
  rlvr::Rng rng(77);
  const auto in = testing_support::random_instance(64, rng);
  auto gap = [&](double eta) {
    const auto r = rlvr::analyze_update(in.dist(), in.batch(), RewardScheme::binary(), eta);
    return std::fabs(r.delta_q_exact - r.closed_form.total);
  };
  const double ratio = gap(1e-2) / gap(5e-3);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(Positivity, FullySampledIsPositive) {
  const auto c = testing_support::fully_sampled();
  const auto v = rlvr::positivity_condition(rlvr::compute_mass_stats(c.dist, c.batch),
                                            RewardScheme::binary());
  EXPECT_TRUE(v.is_guaranteed_positive);
  EXPECT_EQ(v.scenario, rlvr::BatchScenario::fully_sampled);
  EXPECT_EQ(v.clause, rlvr::GuaranteeClause::in_batch_curvature);
}

TEST(Positivity, ZeroCurvatureBalancedIsBoundary) {
  const auto c = testing_support::empty_batch();
  const auto v = rlvr::positivity_condition(rlvr::compute_mass_stats(c.dist, c.batch),
                                            RewardScheme::binary());
  EXPECT_FALSE(v.is_guaranteed_positive);
  EXPECT_EQ(v.outcome, rlvr::PositivityOutcome::boundary);
  EXPECT_EQ(v.condition_lhs, 0.0);
  EXPECT_EQ(v.condition_rhs, 0.0);
}

struct RegimeCase {
  testing_support::Constructed (*build)();
  rlvr::BatchScenario scenario;
};

class PositivityRegimes : public ::testing::TestWithParam<RegimeCase> {};

TEST_P(PositivityRegimes, VerdictMatchesSignOfChange) {
  const auto c = GetParam().build();
  const auto r = rlvr::analyze_update(c.dist, c.batch, RewardScheme::binary(), 0.1);
  EXPECT_EQ(r.verdict.scenario, GetParam().scenario);
  const int sign = (r.closed_form.total > 0) - (r.closed_form.total < 0);
  EXPECT_EQ(sign, c.expected_sign);
  const auto expected = c.expected_sign > 0   ? rlvr::PositivityOutcome::positive
                        : c.expected_sign < 0 ? rlvr::PositivityOutcome::negative
                                              : rlvr::PositivityOutcome::boundary;
  EXPECT_EQ(r.verdict.outcome, expected);
  if (c.expected_sign <= 0) {
    ASSERT_TRUE(r.cauchy_schwarz.has_value());
    EXPECT_FALSE(*r.cauchy_schwarz);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Constructed, PositivityRegimes,
    ::testing::Values(
        RegimeCase{testing_support::fully_sampled, rlvr::BatchScenario::fully_sampled},
        RegimeCase{testing_support::balanced, rlvr::BatchScenario::balanced},
        RegimeCase{testing_support::empty_batch, rlvr::BatchScenario::balanced},
        RegimeCase{testing_support::reward_positive_positive,
                   rlvr::BatchScenario::reward_positive},
        RegimeCase{testing_support::reward_positive_negative,
                   rlvr::BatchScenario::reward_positive},
        RegimeCase{testing_support::reward_negative_positive,
                   rlvr::BatchScenario::reward_negative},
        RegimeCase{testing_support::reward_negative_negative,
                   rlvr::BatchScenario::reward_negative}));

TEST(CauchySchwarz, CertifiesEasyCases) {
  const auto full = testing_support::fully_sampled();
  EXPECT_TRUE(rlvr::cauchy_schwarz_sufficient(rlvr::compute_mass_stats(full.dist, full.batch),
                                              RewardScheme::binary()));
  const auto bal = testing_support::balanced();
  const auto s = rlvr::compute_mass_stats(bal.dist, bal.batch);
  EXPECT_EQ(s.s_r, 0.0);
  EXPECT_TRUE(rlvr::cauchy_schwarz_sufficient(s, RewardScheme::binary()));
  EXPECT_THROW(rlvr::cauchy_schwarz_sufficient(s, RewardScheme{2.0, -1.0}), rlvr::Error);
}

TEST(CauchySchwarz, NeverCertifiesANonPositiveChange) {
  rlvr::Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto in = testing_support::random_instance(8 + trial % 24, rng, 3.0);
    const auto s = rlvr::compute_mass_stats(in.dist(), in.batch());
    if (rlvr::cauchy_schwarz_sufficient(s, RewardScheme::binary())) {
      EXPECT_GT(rlvr::delta_q_closed_form(s, RewardScheme::binary(), 0.1, in.n).total, 0.0);
    }
  }
}

TEST(AnalyzeUpdate, FieldsAgree) {
  const auto r = rlvr::analyze_update(kBalancedDist, kBalancedBatch, RewardScheme::binary(), 0.1);
  EXPECT_EQ(r.n, 2u);
  EXPECT_NEAR(r.delta_q_jacobian, r.closed_form.total, 1e-17);
  EXPECT_NEAR(r.margin, 0.25, 1e-15);
  ASSERT_TRUE(r.decomposition.has_value());
  EXPECT_TRUE(r.verdict.is_guaranteed_positive);
  EXPECT_GT(r.delta_q_exact, 0.0);
  const auto general =
      rlvr::analyze_update(kBalancedDist, kBalancedBatch, RewardScheme{2.0, -0.5}, 0.1);
  EXPECT_FALSE(general.decomposition.has_value());
  EXPECT_FALSE(general.cauchy_schwarz.has_value());
}

}  // namespace
