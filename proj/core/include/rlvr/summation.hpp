#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace rlvr {

/// Pairwise (cascade) summation. Error grows as O(log n) ulps instead of O(n),
/// which matters once the vocabulary reaches ~10^5 near-equal terms.
double pairwise_sum(std::span<const double> values) noexcept;

/// Pairwise sum of x_i * y_i.
double pairwise_dot(std::span<const double> x, std::span<const double> y);

/// Streaming form of pairwise_sum: blocks of 16 terms are summed directly and
/// block sums are merged like a binary counter, so no buffer is needed and the
/// O(log n) error bound is kept.
class PairwiseAccumulator {
 public:
  void add(double x) noexcept {
    block_ += x;
    if (++in_block_ == kBlock) {
      push(block_);
      block_ = 0.0;
      in_block_ = 0;
    }
  }

  double total() const noexcept;

 private:
  static constexpr std::size_t kBlock = 16;
  void push(double s) noexcept;

  std::array<double, 64> partial_{};
  std::uint64_t occupied_ = 0;  // bit k set: partial_[k] holds 2^k blocks
  double block_ = 0.0;
  std::size_t in_block_ = 0;
};

}  // namespace rlvr
