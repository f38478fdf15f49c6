#include "rlvr/adam.hpp"

#include <cmath>

#include "rlvr/error.hpp"

namespace rlvr {

void adaptive_moment_step(std::span<double> params, std::span<const double> grad,
                          AdamState& state, const AdamParams& hp) {
  if (params.size() != grad.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw Error(ErrorCode::invalid_input, "adaptive_moment_step: shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(hp.beta1, t);
  const double bias2 = 1.0 - std::pow(hp.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = hp.beta1 * state.m[i] + (1.0 - hp.beta1) * grad[i];
    state.v[i] = hp.beta2 * state.v[i] + (1.0 - hp.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / bias1;
    const double v_hat = state.v[i] / bias2;
    if (hp.weight_decay != 0.0) params[i] -= hp.learning_rate * hp.weight_decay * params[i];
    params[i] -= hp.learning_rate * m_hat / (std::sqrt(v_hat) + hp.epsilon);
  }
}

}  // namespace rlvr
