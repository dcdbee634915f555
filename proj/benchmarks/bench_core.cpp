#include <benchmark/benchmark.h>

#include "irsho/baseline.hpp"
#include "irsho/config.hpp"
#include "irsho/ho_engine.hpp"
#include "irsho/irs_chain.hpp"
#include "irsho/irs_dist.hpp"
#include "irsho/mc.hpp"
#include "irsho/regions.hpp"

namespace {

irsho::EngineConfig default_engine() {
  return irsho::to_engine_config(irsho::RunConfig{});
}

void bm_geometry_build(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(default_engine());
  }
}
BENCHMARK(bm_geometry_build);

void bm_lens_area(benchmark::State& state) {
  double d = 10.0;
  for (auto _ : state) {
    d = d >= 50.0 ? 10.0 : d + 1e-3;
    benchmark::DoNotOptimize(irsho::lens_area(d, 50.0, 0.2));
  }
}
BENCHMARK(bm_lens_area);

void bm_region_overlap_profile(benchmark::State& state) {
  const auto cfg = default_engine();
  for (auto _ : state) {
    irsho::OverlapProfile prof(cfg.geometry, irsho::Side::original,
                               cfg.channel.d_serv, 620);
    benchmark::DoNotOptimize(prof.area(30.0));
  }
}
BENCHMARK(bm_region_overlap_profile);

void bm_transition_matrix(benchmark::State& state) {
  const auto cfg = default_engine();
  const auto f = irsho::make_region_frame(cfg.geometry, cfg.channel.d_serv, 620);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        irsho::transition_matrix(irsho::Side::original, f, cfg.lambda_r));
  }
}
BENCHMARK(bm_transition_matrix);

void bm_chain_propagate(benchmark::State& state) {
  const auto cfg = default_engine();
  const irsho::ChainConfig cc{cfg.lambda_r, cfg.channel.d_serv};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        irsho::propagate(irsho::Side::original, cfg.geometry, cc));
  }
}
BENCHMARK(bm_chain_propagate);

void bm_quad_plan_held(benchmark::State& state) {
  const auto cfg = default_engine();
  const irsho::DistConfig dc{cfg.lambda_r, cfg.channel.d_serv};
  const irsho::ConditionalPdfSpec spec(cfg.geometry, dc, irsho::Side::original,
                                       irsho::state_held, 620);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irsho::build_quad_plan(spec));
  }
}
BENCHMARK(bm_quad_plan_held);

void bm_step_probs_one(benchmark::State& state) {
  const auto cfg = default_engine();
  const irsho::ChainConfig cc{cfg.lambda_r, cfg.channel.d_serv};
  const auto orig = irsho::propagate(irsho::Side::original, cfg.geometry, cc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irsho::step_prob_ho(620, cfg, orig));
  }
}
BENCHMARK(bm_step_probs_one);

void bm_run_analysis_default(benchmark::State& state) {
  const auto cfg = default_engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(irsho::run_analysis(cfg));
  }
}
BENCHMARK(bm_run_analysis_default)->Unit(benchmark::kMillisecond);

void bm_run_baseline(benchmark::State& state) {
  const auto cfg = default_engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(irsho::run_baseline_analysis(cfg));
  }
}
BENCHMARK(bm_run_baseline)->Unit(benchmark::kMillisecond);

void bm_simulate_matched(benchmark::State& state) {
  const auto cfg = default_engine();
  const long long trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irsho::simulate_matched(cfg, trials, 42));
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(bm_simulate_matched)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
