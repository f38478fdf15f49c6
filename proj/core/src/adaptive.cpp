#include "rlvr/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "rlvr/error.hpp"
#include "rlvr/mass_stats.hpp"
#include "rlvr/rng.hpp"
#include "rlvr/sampling.hpp"
#include "rlvr/summation.hpp"
#include "rlvr/update.hpp"

namespace rlvr {

void ControllerConfig::validate() const {
  if (!(m_target > 0.0) || !std::isfinite(m_target)) {
    throw Error(ErrorCode::invalid_input, "controller: m_target must be positive");
  }
  if (n_initial == 0 || n_min == 0 || n_min > n_initial || n_initial > n_max) {
    throw Error(ErrorCode::invalid_input, "controller: need 1 <= n_min <= n_initial <= n_max");
  }
  if (!(growth_factor > 1.0)) {
    throw Error(ErrorCode::invalid_input, "controller: growth_factor must exceed 1");
  }
  if (!(shrink_threshold > 1.0)) {
    throw Error(ErrorCode::invalid_input, "controller: shrink_threshold must exceed 1");
  }
  if (pilot_size == 0 || max_iterations == 0) {
    throw Error(ErrorCode::invalid_input, "controller: pilot_size and max_iterations must be positive");
  }
}

std::string_view to_string(ControllerAction a) noexcept {
  switch (a) {
    case ControllerAction::grow: return "grow";
    case ControllerAction::shrink: return "shrink";
    case ControllerAction::hold: return "hold";
  }
  return "hold";
}

std::string_view to_string(ControllerStatus s) noexcept {
  switch (s) {
    case ControllerStatus::converged: return "converged";
    case ControllerStatus::above_band: return "above_band";
    case ControllerStatus::capped: return "capped";
    case ControllerStatus::max_iterations: return "max_iterations";
  }
  return "max_iterations";
}

MarginEstimate estimate_margin(const LabeledDistribution& dist, const RewardScheme& rewards,
                               std::uint64_t n, std::uint64_t pilot_size, std::uint64_t seed) {
  if (n == 0 || pilot_size == 0) {
    throw Error(ErrorCode::invalid_input, "estimate_margin: n and pilot_size must be positive");
  }
  rewards.validate();
  const auto p = dist.probabilities();
  const CategoricalSampler sampler(p);
  Rng rng(derive_seed(seed, SeedStream::pilot, n));

  std::vector<double> margins(pilot_size);
  std::uint64_t negatives = 0;
  for (auto& m : margins) {
    const auto batch = sample_batch(dist, sampler, n, rng);
    m = margin(compute_mass_stats(dist, p, batch, rewards), rewards);
    if (m < 0.0) ++negatives;
  }

  MarginEstimate est;
  est.batches = pilot_size;
  est.mean = pairwise_sum(margins) / static_cast<double>(pilot_size);
  est.negative_fraction = static_cast<double>(negatives) / static_cast<double>(pilot_size);
  if (pilot_size > 1) {
    std::vector<double> sq(pilot_size);
    for (std::size_t i = 0; i < sq.size(); ++i) {
      sq[i] = (margins[i] - est.mean) * (margins[i] - est.mean);
    }
    const double var = pairwise_sum(sq) / static_cast<double>(pilot_size - 1);
    est.std_error = std::sqrt(var / static_cast<double>(pilot_size));
  }
  return est;
}

ControllerTrace run_controller(const LabeledDistribution& dist, const RewardScheme& rewards,
                               const ControllerConfig& config, std::uint64_t seed) {
  config.validate();
  const std::uint64_t pilots =
      config.estimation == MarginEstimation::single_batch ? 1 : config.pilot_size;

  auto grown = [&](std::uint64_t n) {
    const auto next = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(n) * config.growth_factor));
    return std::min(config.n_max, std::max(n + 1, next));
  };
  auto shrunk = [&](std::uint64_t n) {
    const auto next = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(n) / config.growth_factor));
    return std::max(config.n_min, std::min(n - 1, next));
  };

  ControllerTrace trace;
  std::uint64_t n = config.n_initial;
  std::uint64_t largest_failing = 0;
  for (std::uint64_t iter = 0; iter < config.max_iterations; ++iter) {
    const auto est = estimate_margin(dist, rewards, n, pilots, seed);
    ControllerStep step{n, est.mean, est.std_error, ControllerAction::hold};

    if (est.mean < config.m_target) {
      largest_failing = std::max(largest_failing, n);
      if (n >= config.n_max) {
        trace.steps.push_back(step);
        trace.status = ControllerStatus::capped;
        break;
      }
      step.action = ControllerAction::grow;
      trace.steps.push_back(step);
      n = grown(n);
      continue;
    }

    if (est.mean >= config.shrink_threshold * config.m_target) {
      const std::uint64_t next = n > 1 ? shrunk(n) : n;
      if (next < n && next > largest_failing) {
        step.action = ControllerAction::shrink;
        trace.steps.push_back(step);
        n = next;
        continue;
      }
      trace.steps.push_back(step);
      trace.status = ControllerStatus::above_band;
      break;
    }

    trace.steps.push_back(step);
    trace.status = ControllerStatus::converged;
    break;
  }
  trace.success = !trace.steps.empty() &&
                  trace.steps.back().estimated_margin >= config.m_target &&
                  trace.status != ControllerStatus::max_iterations;
  return trace;
}

}  // namespace rlvr
