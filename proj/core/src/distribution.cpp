#include "rlvr/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlvr/error.hpp"
#include "rlvr/summation.hpp"

namespace rlvr {

std::vector<double> softmax(std::span<const double> logits, double temperature) {
  if (logits.size() < 2) {
    throw Error(ErrorCode::invalid_input, "softmax: need at least two logits");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::invalid_input, "softmax: temperature must be positive and finite");
  }
  double max_logit = logits.front();
  for (double z : logits) {
    if (!std::isfinite(z)) {
      throw Error(ErrorCode::invalid_input, "softmax: non-finite logit");
    }
    max_logit = std::max(max_logit, z);
  }
  std::vector<double> p(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp((logits[i] - max_logit) / temperature);
  }
  const double norm = pairwise_sum(p);
  for (double& v : p) v /= norm;
  return p;
}

void RewardScheme::validate() const {
  if (!std::isfinite(correct) || !std::isfinite(incorrect)) {
    throw Error(ErrorCode::invalid_input, "rewards must be finite");
  }
  if (!(correct > incorrect)) {
    throw Error(ErrorCode::invalid_input, "reward scheme requires R_c > R_w");
  }
}

LabeledDistribution::LabeledDistribution(std::vector<double> logits,
                                         std::vector<bool> correct_mask,
                                         double temperature)
    : logits_(std::move(logits)),
      correct_mask_(std::move(correct_mask)),
      temperature_(temperature) {
  if (logits_.size() < 2) {
    throw Error(ErrorCode::invalid_input, "distribution needs V >= 2");
  }
  if (correct_mask_.size() != logits_.size()) {
    throw Error(ErrorCode::inconsistent_mask,
                "correct mask length " + std::to_string(correct_mask_.size()) +
                    " != vocabulary size " + std::to_string(logits_.size()));
  }
  num_correct_ = static_cast<std::size_t>(
      std::count(correct_mask_.begin(), correct_mask_.end(), true));
  if (num_correct_ == 0 || num_correct_ == logits_.size()) {
    throw Error(ErrorCode::inconsistent_mask,
                "need at least one correct and one incorrect token");
  }
  const auto p = softmax(logits_, temperature_);
  if (std::any_of(p.begin(), p.end(), [](double v) { return !(v > 0.0); })) {
    throw Error(ErrorCode::invalid_input,
                "logit spread underflows: some probabilities are exactly zero");
  }
}

std::vector<double> LabeledDistribution::probabilities() const {
  return softmax(logits_, temperature_);
}

std::vector<double> LabeledDistribution::effective_logits() const {
  std::vector<double> u(logits_);
  for (double& v : u) v /= temperature_;
  return u;
}

LabeledDistribution LabeledDistribution::with_logits(std::vector<double> logits) const {
  return LabeledDistribution(std::move(logits), correct_mask_, temperature_);
}

std::vector<std::size_t> LabeledDistribution::correct_indices() const {
  std::vector<std::size_t> out;
  out.reserve(num_correct_);
  for (std::size_t i = 0; i < correct_mask_.size(); ++i) {
    if (correct_mask_[i]) out.push_back(i);
  }
  return out;
}

}  // namespace rlvr
