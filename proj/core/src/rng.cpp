#include "rlvr/rng.hpp"

#include <algorithm>

#include "rlvr/error.hpp"

namespace rlvr {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, SeedStream stream,
                          std::uint64_t index) noexcept {
  const auto tag = static_cast<std::uint64_t>(stream);
  return mix64(mix64(root ^ mix64(tag)) + index);
}

CategoricalSampler::CategoricalSampler(std::span<const double> probabilities) {
  if (probabilities.empty()) {
    throw Error(ErrorCode::invalid_input, "CategoricalSampler: empty distribution");
  }
  cdf_.resize(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (!(probabilities[i] >= 0.0)) {
      throw Error(ErrorCode::invalid_input, "CategoricalSampler: negative or NaN weight");
    }
    acc += probabilities[i];
    cdf_[i] = acc;
  }
  if (!(acc > 0.0)) {
    throw Error(ErrorCode::invalid_input, "CategoricalSampler: zero total weight");
  }
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::size_t CategoricalSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  // u < 1 and cdf_.back() == 1, so it never reaches end(); zero-weight
  // entries share a cdf value with their predecessor and are skipped.
  return static_cast<std::size_t>(it - cdf_.begin());
}

std::vector<std::size_t> CategoricalSampler::draw(Rng& rng, std::size_t count) const {
  std::vector<std::size_t> out(count);
  for (auto& idx : out) idx = (*this)(rng);
  return out;
}

}  // namespace rlvr
