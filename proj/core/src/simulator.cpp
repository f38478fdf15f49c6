#include "rlvr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include "rlvr/error.hpp"
#include "rlvr/rng.hpp"
#include "rlvr/summation.hpp"

namespace rlvr {

namespace {

struct StepMetrics {
  double q_pos;
  double improved;
  double worsened;
  double worst_drop;
};

StepMetrics measure(std::span<const double> p, std::span<const double> p0,
                    std::span<const std::size_t> correct) {
  std::vector<double> mass(correct.size());
  std::size_t up = 0;
  std::size_t down = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < correct.size(); ++k) {
    const std::size_t i = correct[k];
    mass[k] = p[i];
    const double d = p[i] - p0[i];
    if (d > 0.0) ++up;
    if (d < 0.0) ++down;
    worst = std::min(worst, d);
  }
  const double count = static_cast<double>(correct.size());
  return {pairwise_sum(mass), static_cast<double>(up) / count,
          static_cast<double>(down) / count, worst};
}

void record(TrajectoryMetrics& out, const StepMetrics& m) {
  out.q_pos.push_back(m.q_pos);
  out.fraction_improved.push_back(m.improved);
  out.fraction_worsened.push_back(m.worsened);
  out.worst_drop.push_back(m.worst_drop);
}

}  // namespace

double TrajectoryMetrics::deepest_drop() const noexcept {
  double worst = 0.0;
  for (double d : worst_drop) worst = std::min(worst, d);
  return worst;
}

void SimulationConfig::validate() const {
  if (vocab_size < 2) throw Error(ErrorCode::invalid_input, "vocab_size must be >= 2");
  if (num_correct == 0 || num_correct >= vocab_size) {
    throw Error(ErrorCode::invalid_input, "need 0 < num_correct < vocab_size");
  }
  if (anchor_index && *anchor_index >= vocab_size) {
    throw Error(ErrorCode::invalid_input, "anchor index outside vocabulary");
  }
  rewards.validate();
  if (!(temperature > 0.0) || !(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::invalid_input, "temperature must be positive, learning rate >= 0");
  }
  if (n_rollouts == 0 || steps == 0) {
    throw Error(ErrorCode::invalid_input, "n_rollouts and steps must be positive");
  }
  if (sampling == SamplingMode::exhaustive && n_rollouts != vocab_size) {
    throw Error(ErrorCode::invalid_input, "exhaustive sampling requires N == vocab_size");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0) ||
      !(weight_decay >= 0.0)) {
    throw Error(ErrorCode::invalid_input, "invalid adaptive-moment parameters");
  }
}

SimulationConfig SimulationConfig::desk_preset() {
  SimulationConfig c;
  c.vocab_size = 2048;
  c.num_correct = 128;
  c.steps = 500;
  c.n_rollouts = 64;
  c.init = InitMode::seeded;
  c.anchor_index = 0;
  return c;
}

SimulationConfig SimulationConfig::large_preset() {
  SimulationConfig c;
  c.vocab_size = 128000;
  c.num_correct = 10000;
  c.steps = 1000;
  c.n_rollouts = 51200;
  c.init = InitMode::seeded;
  c.anchor_index = 0;
  return c;
}

std::vector<bool> correct_mask_for(const SimulationConfig& config) {
  std::vector<bool> mask(config.vocab_size, false);
  std::size_t placed = 0;
  for (std::size_t i = 0; i < config.vocab_size && placed < config.num_correct; ++i) {
    if (config.anchor_index && *config.anchor_index == i) continue;
    mask[i] = true;
    ++placed;
  }
  return mask;
}

std::vector<double> initial_logits(const SimulationConfig& config) {
  std::vector<double> z(config.vocab_size, 0.0);
  if (config.init == InitMode::seeded) {
    const auto mask = correct_mask_for(config);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (mask[i]) z[i] = config.seeded_correct_logit;
    }
  }
  if (config.anchor_index) z[*config.anchor_index] = config.anchor_logit;
  return z;
}

TrajectoryMetrics run_simulation(const SimulationConfig& config) {
  config.validate();
  const std::size_t v = config.vocab_size;
  const auto mask = correct_mask_for(config);
  std::vector<std::size_t> correct;
  for (std::size_t i = 0; i < v; ++i) {
    if (mask[i]) correct.push_back(i);
  }
  std::vector<double> reward(v);
  for (std::size_t i = 0; i < v; ++i) {
    reward[i] = mask[i] ? config.rewards.correct : config.rewards.incorrect;
  }

  auto z = initial_logits(config);
  const auto p0 = softmax(z, config.temperature);

  TrajectoryMetrics out;
  out.n = config.n_rollouts;
  out.seed = config.seed;
  record(out, measure(p0, p0, correct));

  Rng rng(derive_seed(config.seed, SeedStream::rollout));
  AdamState adam(v);
  const AdamParams hp{config.learning_rate, config.beta1, config.beta2, config.epsilon,
                      config.weight_decay};
  const double inv_n = 1.0 / static_cast<double>(config.n_rollouts);
  const double inv_tau = 1.0 / config.temperature;

  std::vector<double> p = p0;
  std::vector<double> advantage(v);  // summed per-token advantage over the draws
  std::vector<double> weighted(v);
  std::vector<double> grad(v);
  std::vector<std::size_t> draws(config.n_rollouts);
  std::vector<char> sampled(v);

  for (std::size_t step = 0; step < config.steps; ++step) {
    if (config.sampling == SamplingMode::exhaustive) {
      std::iota(draws.begin(), draws.end(), std::size_t{0});
    } else {
      const CategoricalSampler sampler(p);
      for (auto& d : draws) d = sampler(rng);
    }

    std::fill(advantage.begin(), advantage.end(), 0.0);
    if (config.baseline == BaselineMode::batch_mean) {
      double total = 0.0;
      for (std::size_t d : draws) total += reward[d];
      const double baseline = total * inv_n;
      for (std::size_t d : draws) advantage[d] += reward[d] - baseline;
    } else {
      // Set-based surrogate: each sampled token counts once with reward
      // R_j - S_R; unsampled tokens carry -S_R through the normalizer term.
      std::fill(sampled.begin(), sampled.end(), 0);
      for (std::size_t d : draws) sampled[d] = 1;
      for (std::size_t i = 0; i < v; ++i) {
        weighted[i] = sampled[i] ? reward[i] * p[i] : 0.0;
      }
      const double s_r = pairwise_sum(weighted);
      for (std::size_t i = 0; i < v; ++i) {
        advantage[i] = (sampled[i] ? reward[i] : 0.0) - s_r;
      }
    }

    if (config.baseline == BaselineMode::batch_mean) {
      // dL/du_k = -(1/N) p_k (c_k - sum_i c_i p_i), c = summed advantages.
      for (std::size_t i = 0; i < v; ++i) weighted[i] = advantage[i] * p[i];
      const double mean_adv = pairwise_sum(weighted);
      for (std::size_t k = 0; k < v; ++k) {
        grad[k] = -inv_n * p[k] * (advantage[k] - mean_adv) * inv_tau;
      }
    } else {
      // advantage already includes the -S_R centring.
      for (std::size_t k = 0; k < v; ++k) grad[k] = -inv_n * p[k] * advantage[k] * inv_tau;
    }

    if (config.optimizer == OptimizerKind::plain_gradient) {
      for (std::size_t k = 0; k < v; ++k) z[k] -= config.learning_rate * grad[k];
    } else {
      adaptive_moment_step(z, grad, adam, hp);
    }

    if (!std::all_of(z.begin(), z.end(), [&](double x) { return std::isfinite(x * inv_tau); })) {
      out.diverged = true;
      break;
    }
    p = softmax(z, config.temperature);
    record(out, measure(p, p0, correct));
  }
  return out;
}

std::vector<TrajectoryMetrics> sweep_rollout_sizes(const SimulationConfig& base,
                                                   std::span<const std::size_t> n_list,
                                                   std::span<const std::uint64_t> seeds,
                                                   bool parallel) {
  if (n_list.empty() || seeds.empty()) {
    throw Error(ErrorCode::invalid_input, "sweep needs at least one N and one seed");
  }
  std::vector<SimulationConfig> configs;
  for (std::size_t n : n_list) {
    for (std::uint64_t s : seeds) {
      SimulationConfig c = base;
      c.n_rollouts = n;
      c.seed = s;
      c.validate();
      configs.push_back(c);
    }
  }

  std::vector<TrajectoryMetrics> results(configs.size());
  if (!parallel) {
    for (std::size_t i = 0; i < configs.size(); ++i) results[i] = run_simulation(configs[i]);
    return results;
  }

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                      configs.size()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < configs.size(); i += workers) {
        results[i] = run_simulation(configs[i]);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return results;
}

std::string_view to_string(InitMode m) noexcept {
  return m == InitMode::zeros ? "zeros" : "seeded";
}

std::string_view to_string(OptimizerKind k) noexcept {
  return k == OptimizerKind::plain_gradient ? "plain_gradient" : "adaptive_moments";
}

std::string_view to_string(BaselineMode b) noexcept {
  return b == BaselineMode::batch_mean ? "batch_mean" : "probability_weighted";
}

std::string_view to_string(SamplingMode s) noexcept {
  return s == SamplingMode::iid ? "iid" : "exhaustive";
}

}  // namespace rlvr
