#include <algorithm>
#include <optional>
#include <vector>

#include <benchmark/benchmark.h>

#include "rlvr/batch.hpp"
#include "rlvr/mass_stats.hpp"
#include "rlvr/rng.hpp"
#include "rlvr/sampling.hpp"
#include "rlvr/update.hpp"

namespace {

struct Fixture {
  explicit Fixture(std::size_t vocab) {
    std::vector<double> z(vocab, 0.0);
    std::vector<bool> mask(vocab, false);
    const std::size_t correct = std::max<std::size_t>(1, vocab / 13);
    for (std::size_t i = 1; i <= correct; ++i) {
      z[i] = 3.0;
      mask[i] = true;
    }
    z[0] = 5.0;
    logits = z;
    dist.emplace(std::move(z), std::move(mask));
    const auto p = dist->probabilities();
    sampler.emplace(p);
  }
  std::vector<double> logits;
  std::optional<rlvr::LabeledDistribution> dist;
  std::optional<rlvr::CategoricalSampler> sampler;
};

void BM_Softmax(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rlvr::softmax(f.logits));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Softmax)->Arg(2048)->Arg(128000);

void BM_MassStats(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  rlvr::Rng rng(1);
  const auto batch = rlvr::sample_batch(*f.dist, *f.sampler, 512, rng);
  const auto p = f.dist->probabilities();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rlvr::compute_mass_stats(*f.dist, p, batch, rlvr::RewardScheme::binary()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MassStats)->Arg(2048)->Arg(128000);

void BM_AnalyzeUpdate(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  rlvr::Rng rng(2);
  const auto batch = rlvr::sample_batch(*f.dist, *f.sampler, 512, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rlvr::analyze_update(*f.dist, batch, rlvr::RewardScheme::binary(), 1e-3));
  }
}
BENCHMARK(BM_AnalyzeUpdate)->Arg(2048)->Arg(128000);

void BM_SampleBatch(benchmark::State& state) {
  const Fixture f(128000);
  rlvr::Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rlvr::sample_batch(*f.dist, *f.sampler, n, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBatch)->Arg(16)->Arg(512)->Arg(51200);

}  // namespace
