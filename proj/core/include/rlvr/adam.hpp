#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rlvr {

struct AdamParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // decoupled (AdamW)
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t size = 0) : m(size, 0.0), v(size, 0.0) {}
};

/// One bias-corrected AdamW step, in place on params and state.
/// Increments state.step before computing the bias corrections.
void adaptive_moment_step(std::span<double> params, std::span<const double> grad,
                          AdamState& state, const AdamParams& hp);

}  // namespace rlvr
