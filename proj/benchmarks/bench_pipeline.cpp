#include <benchmark/benchmark.h>

#include "pmsgp/bench.hpp"
#include "pmsgp/config.hpp"
#include "pmsgp/msp.hpp"
#include "pmsgp/psp.hpp"
#include "pmsgp/scene.hpp"

using namespace pmsgp;

namespace {

const Scene& clutter() {
  static const Scene s = generate_scene(11, 30, ShapeMix{});
  return s;
}

void BM_RenderFullView(benchmark::State& state) {
  const PipelineConfig cfg;
  const VirtualCamera cam = cfg.home_camera();
  for (auto _ : state) benchmark::DoNotOptimize(render_view(clutter(), cam, false));
}
BENCHMARK(BM_RenderFullView)->Unit(benchmark::kMillisecond);

void BM_RenderCrop(benchmark::State& state) {
  const PipelineConfig cfg;
  const VirtualCamera cam = cfg.home_camera();
  for (auto _ : state) benchmark::DoNotOptimize(render_view(clutter(), cam, true));
}
BENCHMARK(BM_RenderCrop)->Unit(benchmark::kMillisecond);

void BM_Psp(benchmark::State& state) {
  const PipelineConfig cfg;
  const OracleSegmenter seg;
  for (auto _ : state) benchmark::DoNotOptimize(run_psp(clutter(), cfg.home_camera(), seg, cfg, 1));
}
BENCHMARK(BM_Psp)->Unit(benchmark::kMillisecond);

void BM_CalibrateCandidates(benchmark::State& state) {
  const PipelineConfig cfg;
  const PspResult p = run_psp(clutter(), cfg.home_camera(), OracleSegmenter{}, cfg, 1);
  const CandidateSet g = generate_baseline_candidates(p.depth, p.refined, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_candidates(g, p.refined, cfg.calibration_step_deg));
  state.counters["candidates"] = static_cast<double>(g.size());
}
BENCHMARK(BM_CalibrateCandidates)->Unit(benchmark::kMillisecond);

void BM_Msp(benchmark::State& state) {
  const PipelineConfig cfg;
  const PspResult p = run_psp(clutter(), cfg.home_camera(), OracleSegmenter{}, cfg, 1);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(run_msp(p.depth, p.refined, BaselineGenerator{}, cfg, cfg.intrinsics));
    } catch (const Error&) {
    }
  }
}
BENCHMARK(BM_Msp)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& state) {
  const PipelineConfig cfg;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(cfg, 3, n));
}
BENCHMARK(BM_Trial)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
