// SPDX-License-Identifier: Apache-2.0
// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include "mmhybrid/experiments.hpp"
#include "mmhybrid/montecarlo.hpp"

using namespace mmhybrid;

namespace {

struct Stage1Fixture {
  ArrayGeometry bs = upa_geometry(8, 8);
  ArrayGeometry ms = upa_geometry(4, 4);
  Codebook f_cb = build_beamsteering_codebook(bs, 32, 16, 6);
  Codebook w_cb = build_beamsteering_codebook(ms, 16, 8, 4);
  ChannelMatrix ch = draw_clustered(bs, ms, {3, 6, 0.1}, 1.0, std::uint64_t{7});
};

const Stage1Fixture& stage1_fixture() {
  static const Stage1Fixture f;
  return f;
}

void BM_Stage1Parallel(benchmark::State& state) {
  const auto& f = stage1_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(stage1_select(f.ch, f.f_cb, f.w_cb).objective);
}
BENCHMARK(BM_Stage1Parallel)->Unit(benchmark::kMicrosecond)->UseRealTime();

void BM_Stage1Reference(benchmark::State& state) {
  const auto& f = stage1_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(stage1_select_reference(f.ch, f.f_cb, f.w_cb).objective);
  }
}
BENCHMARK(BM_Stage1Reference)->Unit(benchmark::kMicrosecond)->UseRealTime();

CampaignConfig trial_campaign() {
  CampaignConfig cfg;
  cfg.sweep = {10.0};
  return cfg;
}

std::optional<double> one_trial(const CampaignConfig& cfg, std::size_t t) {
  Rng rng(derive_seed(cfg.seed, "bench", 0, t));
  const auto users = draw_users(cfg, 0.0, rng);
  try {
    return evaluate_trial(cfg, users, 10.0, nullptr, nullptr).hybrid;
  } catch (const SingularChannelError&) {
    return std::nullopt;
  }
}

void BM_TrialsParallel(benchmark::State& state) {
  const auto cfg = trial_campaign();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = run_trials<double>(2000, [&](std::size_t t) { return one_trial(cfg, t); }, workers);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_TrialsParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_TrialsSerial(benchmark::State& state) {
  const auto cfg = trial_campaign();
  for (auto _ : state) {
    auto r = run_trials_serial<double>(2000, [&](std::size_t t) { return one_trial(cfg, t); });
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_TrialsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
