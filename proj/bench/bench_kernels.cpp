#include <cmath>

#include <benchmark/benchmark.h>

#include "harvest/configurations.hpp"
#include "harvest/correlators.hpp"
#include "harvest/execution.hpp"
#include "harvest/oracle.hpp"
#include "harvest/pipeline.hpp"
#include "harvest/quadrature.hpp"

using namespace harvest;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "omp x" + std::to_string(max_threads()) : "serial");
}

void BM_ImageSum(benchmark::State& state) {
  // light hole: r_h / ell = 0.1 needs a few hundred shells
  const double q = 0.1 * kPi;
  ImageSumControls ctrl{1e-14, 0.0, 2, 100000};
  auto term = [&](long n) {
    const double alpha = std::acosh(std::cosh(q * static_cast<double>(n)) + 1.0);
    SingularIntegralSpec spec{alpha, 0.2, 1.0, SingularIntegralSpec::Kind::complex_exponential_real_part};
    return singular_oscillatory(spec);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(image_sum<double>(term, ctrl, ImageRange::one_sided, 1, mode(state)).sum);
  }
  label(state);
}
BENCHMARK(BM_ImageSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Correlators(benchmark::State& state) {
  BtzBackground bg(10.0, 0.01);
  const auto cfg = build_line(bg, 0.1, 5.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_correlators(cfg, {}, mode(state)).P[0]);
  label(state);
}
BENCHMARK(BM_Correlators)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OracleValue(benchmark::State& state) {
  BtzBackground bg(10.0, 1.0);
  const auto cfg = build_line(bg, 1.0, 1.0, 1.0);
  OracleControls ctrl;
  ctrl.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_value(cfg, ElementKind::C, 0, 1, 0.02, ctrl));
  label(state);
}
BENCHMARK(BM_OracleValue)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  RunConfig base{};
  base.detectors.geometry = GeometryKind::line;
  base.detectors.omega = 0.5;
  const auto pts = sweep_points(base, {parse_sweep("d_horizon:0.01:5:8:log")});
  SweepOptions opts;
  opts.workers = state.range(0) ? max_threads() : 1;
  opts.point.use_cache = false;
  opts.point.exec = Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(pts, opts).size());
  state.SetLabel("workers " + std::to_string(opts.workers));
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
