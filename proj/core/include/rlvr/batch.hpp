#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace rlvr {

class LabeledDistribution;

/// The sampled sets of one rollout batch: A (sampled correct), B (sampled
/// incorrect) and the draw count N. Everything not in A or B is unsampled.
///
/// Sets are stored sorted and duplicate-free. Multiplicities are kept for
/// batches built from draws (they sum to N); batches built from explicit
/// sets may omit them, in which case N is a nominal draw count.
class RolloutBatch {
 public:
  RolloutBatch() = default;

  /// Throws Error(invalid_batch) if the sets intersect, n == 0, or supplied
  /// multiplicities disagree with the sets or do not sum to n.
  RolloutBatch(std::vector<std::size_t> sampled_correct,
               std::vector<std::size_t> sampled_incorrect, std::size_t draw_count,
               std::map<std::size_t, std::size_t> multiplicities = {});

  /// Splits raw draws by the distribution's correct mask. Duplicate draws
  /// collapse to set membership; their counts go to multiplicities().
  static RolloutBatch from_draws(std::span<const std::size_t> draws,
                                 const LabeledDistribution& dist);

  /// Every token drawn exactly once (N = V).
  static RolloutBatch exhaustive(const LabeledDistribution& dist);

  const std::vector<std::size_t>& sampled_correct() const noexcept { return correct_; }
  const std::vector<std::size_t>& sampled_incorrect() const noexcept { return incorrect_; }
  std::size_t draw_count() const noexcept { return draw_count_; }
  const std::map<std::size_t, std::size_t>& multiplicities() const noexcept {
    return multiplicities_;
  }
  bool empty() const noexcept { return correct_.empty() && incorrect_.empty(); }

  /// Checks indices against the vocabulary and the correct mask.
  /// Throws Error(invalid_batch) naming the first offending index.
  void validate_against(const LabeledDistribution& dist) const;

  friend bool operator==(const RolloutBatch&, const RolloutBatch&) = default;

 private:
  std::vector<std::size_t> correct_;
  std::vector<std::size_t> incorrect_;
  std::size_t draw_count_ = 1;
  std::map<std::size_t, std::size_t> multiplicities_;
};

}  // namespace rlvr
