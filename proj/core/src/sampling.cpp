#include "rlvr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlvr/error.hpp"
#include "rlvr/mass_stats.hpp"
#include "rlvr/summation.hpp"

namespace rlvr {

double expected_unsampled_second_moment(double p, std::uint64_t n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::invalid_input, "probability must lie in [0, 1]");
  }
  if (n == 0) return p * p;
  if (p == 0.0 || p == 1.0) return 0.0;
  const double log_value = 2.0 * std::log(p) + static_cast<double>(n) * std::log1p(-p);
  return std::exp(log_value);  // exp of a very negative number flushes to 0
}

UnsampledMoments expected_total_unsampled(const LabeledDistribution& dist, std::uint64_t n) {
  const auto p = dist.probabilities();
  const auto& mask = dist.correct_mask();
  std::vector<double> pos;
  std::vector<double> neg;
  pos.reserve(dist.num_correct());
  neg.reserve(dist.size() - dist.num_correct());
  for (std::size_t i = 0; i < p.size(); ++i) {
    (mask[i] ? pos : neg).push_back(expected_unsampled_second_moment(p[i], n));
  }
  return {pairwise_sum(pos), pairwise_sum(neg)};
}

DecayCurve decay_curve(const LabeledDistribution& dist,
                       std::span<const std::uint64_t> n_values) {
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) {
      throw Error(ErrorCode::invalid_input, "decay_curve: n values must be strictly ascending");
    }
  }
  DecayCurve curve;
  curve.n_values.assign(n_values.begin(), n_values.end());
  for (std::uint64_t n : n_values) {
    const auto m = expected_total_unsampled(dist, n);
    curve.expected_u_pos2.push_back(m.pos);
    curve.expected_u_neg2.push_back(m.neg);
  }
  return curve;
}

RolloutBatch sample_batch(const LabeledDistribution& dist, const CategoricalSampler& sampler,
                          std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorCode::invalid_input, "batch size must be positive");
  const auto draws = sampler.draw(rng, n);
  return RolloutBatch::from_draws(draws, dist);
}

MonteCarloEstimate monte_carlo_unsampled_second_moment(double p, std::uint64_t n,
                                                       std::uint64_t trials,
                                                       std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::invalid_input, "probability must lie in [0, 1]");
  }
  if (trials == 0) throw Error(ErrorCode::invalid_input, "need at least one trial");
  Rng rng(derive_seed(seed, SeedStream::monte_carlo));
  std::uint64_t misses = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    bool drawn = false;
    for (std::uint64_t d = 0; d < n && !drawn; ++d) drawn = uniform01(rng) < p;
    if (!drawn) ++misses;
  }
  const double p2 = p * p;
  const double miss_rate = static_cast<double>(misses) / static_cast<double>(trials);
  const double q = n == 0 ? 1.0 : std::pow(1.0 - p, static_cast<double>(n));
  MonteCarloEstimate est;
  est.trials = trials;
  est.mean = p2 * miss_rate;
  est.std_error = p2 * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
  return est;
}

MonteCarloUnsampled monte_carlo_total_unsampled(const LabeledDistribution& dist,
                                                std::uint64_t n, std::uint64_t trials,
                                                std::uint64_t seed) {
  if (trials < 2) throw Error(ErrorCode::invalid_input, "need at least two trials");
  const auto p = dist.probabilities();
  const CategoricalSampler sampler(p);
  Rng rng(derive_seed(seed, SeedStream::monte_carlo));
  const auto& mask = dist.correct_mask();

  std::vector<double> pos(trials);
  std::vector<double> neg(trials);
  std::vector<char> seen(p.size());
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::uint64_t d = 0; d < n; ++d) seen[sampler(rng)] = 1;
    double up = 0.0;
    double un = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (seen[i]) continue;
      (mask[i] ? up : un) += p[i] * p[i];
    }
    pos[t] = up;
    neg[t] = un;
  }

  auto summarize = [trials](const std::vector<double>& xs) {
    MonteCarloEstimate e;
    e.trials = trials;
    e.mean = pairwise_sum(xs) / static_cast<double>(trials);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - e.mean) * (xs[i] - e.mean);
    const double var = pairwise_sum(sq) / static_cast<double>(trials - 1);
    e.std_error = std::sqrt(var / static_cast<double>(trials));
    return e;
  };
  return {summarize(pos), summarize(neg)};
}

}  // namespace rlvr
