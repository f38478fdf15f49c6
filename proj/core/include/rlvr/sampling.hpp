#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rlvr/batch.hpp"
#include "rlvr/distribution.hpp"
#include "rlvr/rng.hpp"

namespace rlvr {

/// Expected unsampled second-moment contribution p^2 (1 - p)^n of one token
/// after n independent draws. Evaluated in log space; underflow flushes to 0.
double expected_unsampled_second_moment(double p, std::uint64_t n);

struct UnsampledMoments {
  double pos = 0.0;  // correct tokens
  double neg = 0.0;  // incorrect tokens
};

/// Termwise sum of expected_unsampled_second_moment over correct and
/// incorrect tokens.
UnsampledMoments expected_total_unsampled(const LabeledDistribution& dist, std::uint64_t n);

struct DecayCurve {
  std::vector<std::uint64_t> n_values;
  std::vector<double> expected_u_pos2;
  std::vector<double> expected_u_neg2;
};

/// n_values must be strictly ascending.
DecayCurve decay_curve(const LabeledDistribution& dist, std::span<const std::uint64_t> n_values);

/// N i.i.d. categorical draws from the distribution, collapsed into a batch.
RolloutBatch sample_batch(const LabeledDistribution& dist, const CategoricalSampler& sampler,
                          std::size_t n, Rng& rng);

struct MonteCarloEstimate {
  double mean = 0.0;
  /// Standard error of the mean. For the single-token estimator this is the
  /// binomial standard error under the analytic miss probability, so it stays
  /// meaningful when no trial ever leaves the token unsampled.
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Estimates E[p^2 1{token never drawn in n Bernoulli(p) draws}].
MonteCarloEstimate monte_carlo_unsampled_second_moment(double p, std::uint64_t n,
                                                       std::uint64_t trials,
                                                       std::uint64_t seed);

struct MonteCarloUnsampled {
  MonteCarloEstimate pos;
  MonteCarloEstimate neg;
};

/// Empirical mean of (U_pos2, U_neg2) over simulated categorical batches of
/// size n. Standard errors are empirical.
MonteCarloUnsampled monte_carlo_total_unsampled(const LabeledDistribution& dist,
                                                std::uint64_t n, std::uint64_t trials,
                                                std::uint64_t seed);

}  // namespace rlvr
