#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "../support/instances.hpp"
#include "../support/oracles.hpp"
#include "rlvr/batch.hpp"
#include "rlvr/error.hpp"
#include "rlvr/mass_stats.hpp"

namespace {

using rlvr::LabeledDistribution;
using rlvr::RolloutBatch;

TEST(MassStats, UniformFourTokens) {
  const LabeledDistribution d({0, 0, 0, 0}, {true, true, false, false});
  const auto s = rlvr::compute_mass_stats(d, RolloutBatch({0, 1}, {}, 2));
  EXPECT_DOUBLE_EQ(s.p_pos, 0.5);
  EXPECT_DOUBLE_EQ(s.a2, 0.125);
  EXPECT_DOUBLE_EQ(s.q_pos, 0.5);
  EXPECT_DOUBLE_EQ(s.u_pos2, 0.0);
  EXPECT_DOUBLE_EQ(s.u_neg2, 0.125);
  EXPECT_DOUBLE_EQ(s.s_r, 0.5);
}

TEST(MassStats, EmptyBatchLeavesEverythingUnsampled) {
  const LabeledDistribution d({0.3, -1.0, 2.0}, {false, true, false});
  const auto s = rlvr::compute_mass_stats(d, RolloutBatch({}, {}, 3));
  EXPECT_EQ(s.p_pos, 0.0);
  EXPECT_EQ(s.p_neg, 0.0);
  EXPECT_EQ(s.s_r, 0.0);
  EXPECT_NEAR(s.u2, s.p2, 1e-16);
  EXPECT_NEAR(s.p_out, 1.0, 1e-15);
}

TEST(MassStats, RejectsBatchesInconsistentWithMask) {
  const LabeledDistribution d({0, 0, 0}, {true, false, false});
  try {
    rlvr::compute_mass_stats(d, RolloutBatch({1}, {}, 1));
    FAIL() << "expected an invalid batch error";
  } catch (const rlvr::Error& e) {
    EXPECT_EQ(e.code(), rlvr::ErrorCode::invalid_batch);
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
  EXPECT_THROW(rlvr::compute_mass_stats(d, RolloutBatch({}, {0}, 1)), rlvr::Error);
  EXPECT_THROW(rlvr::compute_mass_stats(d, RolloutBatch({}, {7}, 1)), rlvr::Error);
}

TEST(MassStats, MatchesNaiveOracleAndPartitionIdentities) {
  rlvr::Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto in = testing_support::random_instance(64, rng);
    const auto d = in.dist();
    const auto s = rlvr::compute_mass_stats(d, in.batch());
    const auto ref = oracle::mass_stats(oracle::softmax(in.logits, in.temperature), in.mask,
                                        in.sampled_correct, in.sampled_incorrect);
    EXPECT_NEAR(s.p_pos, ref.p_pos, 1e-15);
    EXPECT_NEAR(s.p_neg, ref.p_neg, 1e-15);
    EXPECT_NEAR(s.q_pos, ref.q_pos, 1e-15);
    EXPECT_NEAR(s.q_neg, ref.q_neg, 1e-15);
    EXPECT_NEAR(s.a2, ref.a2, 1e-15);
    EXPECT_NEAR(s.b2, ref.b2, 1e-15);
    EXPECT_NEAR(s.u_pos2, ref.u_pos2, 1e-15);
    EXPECT_NEAR(s.u_neg2, ref.u_neg2, 1e-15);

    EXPECT_NEAR(s.q_pos + s.q_neg, 1.0, 1e-12);
    EXPECT_NEAR(s.p_pos + s.p_neg + s.p_out, 1.0, 1e-12);
    EXPECT_NEAR(s.q_pos, s.p_pos + s.p_pos_out, 1e-12);
    EXPECT_NEAR(s.q_neg, s.p_neg + s.p_neg_out, 1e-12);
    EXPECT_NEAR(s.u2, s.u_pos2 + s.u_neg2, 1e-15);
    EXPECT_LE(s.a2, s.p_pos * s.p_pos);
    EXPECT_LE(s.b2, s.p_neg * s.p_neg);
    EXPECT_LE(s.u_pos2, s.p_pos_out * s.p_pos_out);
    EXPECT_LE(s.u_neg2, s.p_neg_out * s.p_neg_out);
    EXPECT_GE(s.s_r, -1.0);
    EXPECT_LE(s.s_r, 1.0);
  }
}

TEST(MassStats, PrecomputedProbabilitiesGiveSameResult) {
  const LabeledDistribution d({1.0, 0.0, -1.0, 0.5}, {true, false, true, false});
  const RolloutBatch b({0}, {1}, 4);
  const auto p = d.probabilities();
  const rlvr::RewardScheme rewards{2.0, -0.5};
  const auto a = rlvr::compute_mass_stats(d, b, rewards);
  const auto c = rlvr::compute_mass_stats(d, p, b, rewards);
  EXPECT_EQ(a.s_r, c.s_r);
  EXPECT_EQ(a.a2, c.a2);
  EXPECT_NEAR(a.s_r, 2.0 * p[0] - 0.5 * p[1], 1e-16);
}

TEST(PassAtK, Examples) {
  EXPECT_DOUBLE_EQ(rlvr::pass_at_k(0.5, 1), 0.5);
  EXPECT_DOUBLE_EQ(rlvr::pass_at_k(0.5, 2), 0.75);
  EXPECT_EQ(rlvr::pass_at_k(0.0, 7), 0.0);
  EXPECT_EQ(rlvr::pass_at_k(1.0, 7), 1.0);
  EXPECT_THROW(rlvr::pass_at_k(1.5, 1), rlvr::Error);
  EXPECT_THROW(rlvr::pass_at_k(-0.1, 1), rlvr::Error);
  EXPECT_THROW(rlvr::pass_at_k(0.5, 0), rlvr::Error);
}

TEST(PassAtK, MonotoneInQAndK) {
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double v = rlvr::pass_at_k(i / 100.0, 5);
    EXPECT_GT(v, prev);
    prev = v;
  }
  for (std::uint64_t k = 1; k < 50; ++k) {
    EXPECT_LE(rlvr::pass_at_k(0.03, k), rlvr::pass_at_k(0.03, k + 1));
  }
}

TEST(ExpectedPassAtK, Examples) {
  EXPECT_DOUBLE_EQ(rlvr::expected_pass_at_k(std::vector<double>{0.5, 0.5}, 1), 0.5);
  EXPECT_DOUBLE_EQ(rlvr::expected_pass_at_k(std::vector<double>{0.0, 1.0}, 3), 0.5);
  EXPECT_THROW(rlvr::expected_pass_at_k(std::vector<double>{}, 3), rlvr::Error);
}

TEST(ExpectedPassAtK, AgreesWithTermwiseMeanAndIncreases) {
  rlvr::Rng rng(5);
  std::vector<double> q(16);
  for (auto& x : q) x = rlvr::uniform01(rng);
  double mean = 0.0;
  for (double x : q) mean += rlvr::pass_at_k(x, 4);
  mean /= 16.0;
  EXPECT_NEAR(rlvr::expected_pass_at_k(q, 4), mean, 1e-15);
  auto raised = q;
  raised[3] = std::min(1.0, raised[3] + 0.05);
  EXPECT_GT(rlvr::expected_pass_at_k(raised, 4), rlvr::expected_pass_at_k(q, 4));
}

TEST(RolloutBatch, FromDrawsCollapsesDuplicates) {
  const LabeledDistribution d({0, 0, 0, 0}, {true, false, true, false});
  const std::vector<std::size_t> draws{2, 1, 2, 2, 0, 1};
  const auto b = RolloutBatch::from_draws(draws, d);
  EXPECT_EQ(b.sampled_correct(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(b.sampled_incorrect(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(b.draw_count(), 6u);
  EXPECT_EQ(b.multiplicities().at(2), 3u);
  EXPECT_EQ(b.multiplicities().at(1), 2u);
}

TEST(RolloutBatch, RejectsMalformedBatches) {
  EXPECT_THROW(RolloutBatch({1}, {1}, 2), rlvr::Error);
  EXPECT_THROW(RolloutBatch({1}, {2}, 0), rlvr::Error);
  EXPECT_THROW(RolloutBatch({1}, {2}, 3, {{1, 1}, {2, 1}}), rlvr::Error);
  EXPECT_THROW(RolloutBatch({1}, {2}, 2, {{1, 1}, {3, 1}}), rlvr::Error);
  EXPECT_NO_THROW(RolloutBatch({1}, {2}, 3, {{1, 2}, {2, 1}}));
}

TEST(RolloutBatch, ExhaustiveSamplesEverything) {
  const LabeledDistribution d({0, 1, 2}, {true, false, false});
  const auto b = RolloutBatch::exhaustive(d);
  EXPECT_EQ(b.draw_count(), 3u);
  const auto s = rlvr::compute_mass_stats(d, b);
  EXPECT_EQ(s.u2, 0.0);
  EXPECT_EQ(s.p_out, 0.0);
}

}  // namespace
