#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rlvr {

using Rng = std::mt19937_64;

/// Named seed streams. A root seed is expanded per stream so that
/// consumers never share a generator.
enum class SeedStream : std::uint64_t {
  rollout = 1,
  pilot = 2,
  monte_carlo = 3,
  placement = 4,
  generator = 5,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Splitting rule: seed = mix64(mix64(root ^ mix64(stream)) + index).
/// Stable across releases; changing it changes every emitted artifact.
std::uint64_t derive_seed(std::uint64_t root, SeedStream stream,
                          std::uint64_t index = 0) noexcept;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
/// Used instead of std::uniform_real_distribution so results do not depend
/// on the standard library implementation.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF sampler over a fixed categorical distribution
/// (draws are i.i.d. with replacement).
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> probabilities);

  std::size_t operator()(Rng& rng) const;

  std::vector<std::size_t> draw(Rng& rng, std::size_t count) const;

  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace rlvr
