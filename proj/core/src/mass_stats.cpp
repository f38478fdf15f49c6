#include "rlvr/mass_stats.hpp"

#include <cmath>
#include <vector>

#include "rlvr/error.hpp"
#include "rlvr/summation.hpp"

namespace rlvr {

namespace {

enum Bucket : unsigned char { kA, kB, kUPos, kUNeg };

struct Moments {
  PairwiseAccumulator first;
  PairwiseAccumulator second;

  void add(double p) noexcept {
    first.add(p);
    second.add(p * p);
  }
  double m1() const noexcept { return first.total(); }
  double m2() const noexcept { return second.total(); }
};

}  // namespace

MassStats compute_mass_stats(const LabeledDistribution& dist, const RolloutBatch& batch,
                             const RewardScheme& rewards) {
  const auto p = dist.probabilities();
  return compute_mass_stats(dist, p, batch, rewards);
}

MassStats compute_mass_stats(const LabeledDistribution& dist, std::span<const double> p,
                             const RolloutBatch& batch, const RewardScheme& rewards) {
  if (p.size() != dist.size()) {
    throw Error(ErrorCode::invalid_input, "probability vector length mismatch");
  }
  batch.validate_against(dist);

  const std::size_t v = dist.size();
  std::vector<Bucket> bucket(v);
  const auto& mask = dist.correct_mask();
  for (std::size_t i = 0; i < v; ++i) bucket[i] = mask[i] ? kUPos : kUNeg;
  for (std::size_t i : batch.sampled_correct()) bucket[i] = kA;
  for (std::size_t i : batch.sampled_incorrect()) bucket[i] = kB;

  Moments sets[4];
  Moments correct, incorrect, unsampled, all;
  for (std::size_t i = 0; i < v; ++i) {
    sets[bucket[i]].add(p[i]);
    (mask[i] ? correct : incorrect).add(p[i]);
    if (bucket[i] == kUPos || bucket[i] == kUNeg) unsampled.add(p[i]);
    all.add(p[i]);
  }

  MassStats s;
  s.p_pos = sets[kA].m1();
  s.p_neg = sets[kB].m1();
  s.p_pos_out = sets[kUPos].m1();
  s.p_neg_out = sets[kUNeg].m1();
  s.p_out = unsampled.m1();
  s.q_pos = correct.m1();
  s.q_neg = incorrect.m1();
  s.a2 = sets[kA].m2();
  s.b2 = sets[kB].m2();
  s.u_pos2 = sets[kUPos].m2();
  s.u_neg2 = sets[kUNeg].m2();
  s.u2 = unsampled.m2();
  s.p2 = all.m2();
  s.s_r = rewards.correct * s.p_pos + rewards.incorrect * s.p_neg;
  return s;
}

double pass_at_k(double q_pos, std::uint64_t k) {
  if (!(q_pos >= 0.0 && q_pos <= 1.0)) {
    throw Error(ErrorCode::invalid_input, "pass_at_k: q_pos must lie in [0, 1]");
  }
  if (k == 0) {
    throw Error(ErrorCode::invalid_input, "pass_at_k: k must be positive");
  }
  if (q_pos == 1.0) return 1.0;
  // -expm1(k log1p(-q)) keeps full precision for small q.
  return -std::expm1(static_cast<double>(k) * std::log1p(-q_pos));
}

double expected_pass_at_k(std::span<const double> q_pos_list, std::uint64_t k) {
  if (q_pos_list.empty()) {
    throw Error(ErrorCode::invalid_input, "expected_pass_at_k: empty task list");
  }
  std::vector<double> terms(q_pos_list.size());
  for (std::size_t i = 0; i < q_pos_list.size(); ++i) {
    terms[i] = pass_at_k(q_pos_list[i], k);
  }
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

}  // namespace rlvr
