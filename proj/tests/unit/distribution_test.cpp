#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "rlvr/distribution.hpp"
#include "rlvr/error.hpp"
#include "rlvr/rng.hpp"
#include "rlvr/summation.hpp"

namespace {

using rlvr::Error;
using rlvr::ErrorCode;
using rlvr::LabeledDistribution;

TEST(Softmax, UniformOverEqualLogits) {
  const auto p = rlvr::softmax(std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Softmax, TwoTokenLogOdds) {
  const auto p = rlvr::softmax(std::vector<double>{std::log(3.0), 0.0});
  EXPECT_NEAR(p[0], 0.75, 1e-15);
  EXPECT_NEAR(p[1], 0.25, 1e-15);
}

TEST(Softmax, TemperatureDividesLogits) {
  const std::vector<double> z{1.0, -0.5, 2.0, 0.25};
  const auto hot = rlvr::softmax(z, 2.0);
  std::vector<double> halved(z);
  for (auto& x : halved) x /= 2.0;
  const auto ref = rlvr::softmax(halved);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(hot[i], ref[i], 1e-16);
}

TEST(Softmax, ShiftInvariant) {
  rlvr::Rng rng(17);
  std::vector<double> z(64);
  for (auto& x : z) x = 10.0 * rlvr::uniform01(rng) - 5.0;
  const auto p = rlvr::softmax(z);
  for (double shift : {-700.0, -3.0, 1.0, 650.0}) {
    std::vector<double> moved(z);
    for (auto& x : moved) x += shift;
    const auto q = rlvr::softmax(moved);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(q[i], p[i], 1e-15 + 1e-13 * p[i]);
  }
}

TEST(Softmax, ExtremeLogitsStayFinite) {
  const auto p = rlvr::softmax(std::vector<double>{1000.0, -1000.0, 0.0});
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], 0.0);
  for (double x : p) EXPECT_TRUE(std::isfinite(x));
}

TEST(Softmax, LargeVocabularyMatchesLongDouble) {
  constexpr std::size_t kVocab = 128000;
  rlvr::Rng rng(2024);
  std::vector<double> z(kVocab);
  for (auto& x : z) x = 6.0 * rlvr::uniform01(rng) - 3.0;
  const auto p = rlvr::softmax(z);
  const auto ref = oracle::softmax(z);
  double worst = 0.0;
  for (std::size_t i = 0; i < kVocab; ++i) {
    worst = std::max(worst, static_cast<double>(std::fabs(p[i] - ref[i]) / ref[i]));
  }
  EXPECT_LT(worst, 1e-13);
  EXPECT_NEAR(rlvr::pairwise_sum(p), 1.0, 1e-14);
}

TEST(Softmax, RejectsBadInput) {
  EXPECT_THROW(rlvr::softmax(std::vector<double>{1.0}), Error);
  EXPECT_THROW(rlvr::softmax(std::vector<double>{1.0, NAN}), Error);
  EXPECT_THROW(rlvr::softmax(std::vector<double>{1.0, INFINITY}), Error);
  EXPECT_THROW(rlvr::softmax(std::vector<double>{1.0, 2.0}, 0.0), Error);
  EXPECT_THROW(rlvr::softmax(std::vector<double>{1.0, 2.0}, -1.0), Error);
}

TEST(RewardScheme, Validation) {
  EXPECT_TRUE(rlvr::RewardScheme::binary().is_binary());
  EXPECT_NO_THROW((rlvr::RewardScheme{2.0, 0.0}.validate()));
  EXPECT_THROW((rlvr::RewardScheme{0.0, 0.0}.validate()), Error);
  EXPECT_THROW((rlvr::RewardScheme{-1.0, 1.0}.validate()), Error);
  EXPECT_THROW((rlvr::RewardScheme{NAN, 0.0}.validate()), Error);
}

TEST(LabeledDistribution, ExposesPartition) {
  const LabeledDistribution d({0.0, 1.0, 2.0, 3.0}, {true, false, true, false}, 2.0);
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ(d.num_correct(), 2u);
  EXPECT_EQ(d.correct_indices(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(d.effective_logits(), (std::vector<double>{0.0, 0.5, 1.0, 1.5}));
  const auto p = d.probabilities();
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-15);
  const auto moved = d.with_logits({0.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(moved.correct_mask(), d.correct_mask());
  EXPECT_DOUBLE_EQ(moved.temperature(), 2.0);
}

TEST(LabeledDistribution, RejectsInvalidConstruction) {
  auto code_of = [](auto&& build) {
    try {
      build();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::parse_error;
  };
  EXPECT_EQ(code_of([] { LabeledDistribution({0.0}, {true}); }), ErrorCode::invalid_input);
  EXPECT_EQ(code_of([] { LabeledDistribution({0.0, 1.0}, {true}); }), ErrorCode::inconsistent_mask);
  EXPECT_EQ(code_of([] { LabeledDistribution({0.0, 1.0}, {true, true}); }),
            ErrorCode::inconsistent_mask);
  EXPECT_EQ(code_of([] { LabeledDistribution({0.0, 1.0}, {false, false}); }),
            ErrorCode::inconsistent_mask);
  EXPECT_EQ(code_of([] { LabeledDistribution({0.0, -2000.0}, {true, false}); }),
            ErrorCode::invalid_input);
}

TEST(PairwiseSum, ExactOnRepresentableValues) {
  std::vector<double> x(1000, 0.1);
  EXPECT_NEAR(rlvr::pairwise_sum(x), 100.0, 1e-12);
  EXPECT_EQ(rlvr::pairwise_sum(std::vector<double>{}), 0.0);
  EXPECT_DOUBLE_EQ(rlvr::pairwise_dot(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}),
                   32.0);
}

TEST(PairwiseAccumulator, MatchesBatchPairwiseSum) {
  rlvr::Rng rng(4);
  for (std::size_t n : {0u, 1u, 15u, 16u, 17u, 1000u, 131071u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = rlvr::uniform01(rng) * 1e-3;
    rlvr::PairwiseAccumulator acc;
    for (double v : x) acc.add(v);
    long double ref = 0;
    for (double v : x) ref += v;
    EXPECT_NEAR(acc.total(), static_cast<double>(ref), 1e-15 * std::max(1.0, double(n)) * 1e-3);
    EXPECT_NEAR(acc.total(), rlvr::pairwise_sum(x), 1e-14 * static_cast<double>(ref) + 1e-300);
  }
}

}  // namespace
