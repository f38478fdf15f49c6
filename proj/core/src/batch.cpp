#include "rlvr/batch.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rlvr/distribution.hpp"
#include "rlvr/error.hpp"

namespace rlvr {

namespace {

void sort_unique(std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

RolloutBatch::RolloutBatch(std::vector<std::size_t> sampled_correct,
                           std::vector<std::size_t> sampled_incorrect,
                           std::size_t draw_count,
                           std::map<std::size_t, std::size_t> multiplicities)
    : correct_(std::move(sampled_correct)),
      incorrect_(std::move(sampled_incorrect)),
      draw_count_(draw_count),
      multiplicities_(std::move(multiplicities)) {
  if (draw_count_ == 0) {
    throw Error(ErrorCode::invalid_batch, "draw count N must be positive");
  }
  sort_unique(correct_);
  sort_unique(incorrect_);
  std::vector<std::size_t> overlap;
  std::set_intersection(correct_.begin(), correct_.end(), incorrect_.begin(),
                        incorrect_.end(), std::back_inserter(overlap));
  if (!overlap.empty()) {
    throw Error(ErrorCode::invalid_batch,
                "token " + std::to_string(overlap.front()) +
                    " is in both the sampled-correct and sampled-incorrect sets");
  }
  if (multiplicities_.empty()) return;

  std::size_t total = 0;
  for (const auto& [idx, count] : multiplicities_) {
    const bool in_a = std::binary_search(correct_.begin(), correct_.end(), idx);
    const bool in_b = std::binary_search(incorrect_.begin(), incorrect_.end(), idx);
    if (count == 0 || !(in_a || in_b)) {
      throw Error(ErrorCode::invalid_batch,
                  "multiplicity entry for token " + std::to_string(idx) +
                      " does not match a sampled token");
    }
    total += count;
  }
  if (multiplicities_.size() != correct_.size() + incorrect_.size()) {
    throw Error(ErrorCode::invalid_batch, "every sampled token needs a multiplicity");
  }
  if (total != draw_count_) {
    throw Error(ErrorCode::invalid_batch,
                "multiplicities sum to " + std::to_string(total) + ", expected N = " +
                    std::to_string(draw_count_));
  }
}

RolloutBatch RolloutBatch::from_draws(std::span<const std::size_t> draws,
                                      const LabeledDistribution& dist) {
  if (draws.empty()) {
    throw Error(ErrorCode::invalid_batch, "from_draws: no draws");
  }
  std::map<std::size_t, std::size_t> counts;
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
  for (std::size_t idx : draws) {
    if (idx >= dist.size()) {
      throw Error(ErrorCode::invalid_batch,
                  "drawn index " + std::to_string(idx) + " outside vocabulary");
    }
    if (counts[idx]++ == 0) (dist.is_correct(idx) ? a : b).push_back(idx);
  }
  return RolloutBatch(std::move(a), std::move(b), draws.size(), std::move(counts));
}

RolloutBatch RolloutBatch::exhaustive(const LabeledDistribution& dist) {
  std::vector<std::size_t> all(dist.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return from_draws(all, dist);
}

void RolloutBatch::validate_against(const LabeledDistribution& dist) const {
  for (std::size_t idx : correct_) {
    if (idx >= dist.size()) {
      throw Error(ErrorCode::invalid_batch,
                  "sampled-correct index " + std::to_string(idx) + " outside vocabulary");
    }
    if (!dist.is_correct(idx)) {
      throw Error(ErrorCode::invalid_batch, "sampled-correct index " + std::to_string(idx) +
                                                " is labeled incorrect");
    }
  }
  for (std::size_t idx : incorrect_) {
    if (idx >= dist.size()) {
      throw Error(ErrorCode::invalid_batch,
                  "sampled-incorrect index " + std::to_string(idx) + " outside vocabulary");
    }
    if (dist.is_correct(idx)) {
      throw Error(ErrorCode::invalid_batch, "sampled-incorrect index " + std::to_string(idx) +
                                                " is labeled correct");
    }
  }
}

}  // namespace rlvr
