#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rlvr {

/// Stabilized softmax of logits / temperature (max-subtraction, pairwise
/// normalizer). Throws Error(invalid_input) on fewer than two logits, a
/// non-finite logit, or a non-positive temperature.
std::vector<double> softmax(std::span<const double> logits, double temperature = 1.0);

/// Rewards assigned to sampled-correct (R_c) and sampled-incorrect (R_w)
/// tokens. Unsampled tokens always carry reward zero.
struct RewardScheme {
  double correct = 1.0;
  double incorrect = -1.0;

  static RewardScheme binary() noexcept { return {}; }

  bool is_binary() const noexcept { return correct == 1.0 && incorrect == -1.0; }

  /// Throws unless R_c > R_w and both are finite.
  void validate() const;

  friend bool operator==(const RewardScheme&, const RewardScheme&) = default;
};

/// Logits over a vocabulary with a correct/incorrect partition.
///
/// Logits are the single source of truth: probabilities are recomputed on
/// every call to probabilities(). Invariants checked at construction:
/// V >= 2, at least one correct and one incorrect token, finite logits,
/// positive temperature, and strictly positive softmax output.
class LabeledDistribution {
 public:
  LabeledDistribution(std::vector<double> logits, std::vector<bool> correct_mask,
                      double temperature = 1.0);

  std::size_t size() const noexcept { return logits_.size(); }
  std::span<const double> logits() const noexcept { return logits_; }
  const std::vector<bool>& correct_mask() const noexcept { return correct_mask_; }
  double temperature() const noexcept { return temperature_; }
  bool is_correct(std::size_t i) const { return correct_mask_.at(i); }
  std::size_t num_correct() const noexcept { return num_correct_; }

  /// softmax(logits / temperature).
  std::vector<double> probabilities() const;

  /// Logits divided by the temperature. The one-step theory moves these.
  std::vector<double> effective_logits() const;

  /// Same mask and temperature, new logits.
  LabeledDistribution with_logits(std::vector<double> logits) const;

  /// Indices of correct tokens, ascending.
  std::vector<std::size_t> correct_indices() const;

 private:
  std::vector<double> logits_;
  std::vector<bool> correct_mask_;
  double temperature_;
  std::size_t num_correct_ = 0;
};

}  // namespace rlvr
