#include "rlvr/summation.hpp"

#include <vector>

#include "rlvr/error.hpp"

namespace rlvr {

namespace {

constexpr std::size_t kBlock = 16;

double sum_range(const double* data, std::size_t n) noexcept {
  if (n <= kBlock) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return sum_range(data, half) + sum_range(data + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  return sum_range(values.data(), values.size());
}

double pairwise_dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::invalid_input, "pairwise_dot: length mismatch");
  }
  std::vector<double> products(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) products[i] = x[i] * y[i];
  return pairwise_sum(products);
}

void PairwiseAccumulator::push(double s) noexcept {
  std::size_t level = 0;
  while (occupied_ & (std::uint64_t{1} << level)) {
    s = partial_[level] + s;
    occupied_ &= ~(std::uint64_t{1} << level);
    ++level;
  }
  partial_[level] = s;
  occupied_ |= std::uint64_t{1} << level;
}

double PairwiseAccumulator::total() const noexcept {
  double t = block_;
  for (std::size_t level = 0; level < partial_.size(); ++level) {
    if (occupied_ & (std::uint64_t{1} << level)) t = partial_[level] + t;
  }
  return t;
}

}  // namespace rlvr
