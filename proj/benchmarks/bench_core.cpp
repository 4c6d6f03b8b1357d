// Hot-path timings: oracle evaluation, chord integration, one X-ray
// transform, and normal-operator assembly at a small grid. Run with
// --benchmark_min_time=... to tighten, defaults are fine for a smoke check.

#include <benchmark/benchmark.h>

#include <complex>

#include "twistor/flow.hpp"
#include "twistor/grid.hpp"
#include "twistor/normal.hpp"
#include "twistor/oracles.hpp"
#include "twistor/xray.hpp"

using namespace twistor;

static void BM_oracle_eval(benchmark::State& state) {
  const CCParams p{0.3, 1.0};
  cplx z(0.4, 0.2), mu(0.3, 0.5);
  for (auto _ : state) {
    auto v = beta_cc(p, z, mu);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_oracle_eval);

static void BM_oracle_inverse(benchmark::State& state) {
  const CCParams p{0.3, 1.0};
  const auto w = beta_cc(p, cplx(0.4, 0.2), cplx(0.3, 0.5));
  for (auto _ : state) {
    auto v = beta_cc_inverse(p, w.first, w.second);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_oracle_inverse);

static void BM_chord(benchmark::State& state) {
  const auto m = constant_curvature_metric(0.3, 1.0);
  const BoundaryPoint b{0.7, 0.4};
  for (auto _ : state) {
    auto rec = chord(m, b);
    benchmark::DoNotOptimize(rec.exit_time);
  }
}
BENCHMARK(BM_chord);

static void BM_xray_Ik(benchmark::State& state) {
  const auto m = constant_curvature_metric(0.3, 1.0);
  GridSpec spec;
  spec.n_r = 16;
  spec.n_theta = 64;
  spec.k_max = 16;
  const PolarGrid g = polar_grid(m, spec);
  const ModeField a = sample_single_mode(
      g, 0, [](cplx z) { return cplx(1.0) + 0.3 * z; }, FieldWeight::rho_half);
  const BoundaryPoint b{0.7, 0.4};
  for (auto _ : state) {
    auto v = xray_Ik(m, a, b, 48);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_xray_Ik);

static void BM_normal_assembly(benchmark::State& state) {
  const auto m = constant_curvature_metric(0.3, 1.0);
  GridSpec spec;
  spec.n_r = (int)state.range(0);
  spec.n_theta = 4 * spec.n_r;
  spec.k_max = 4;
  spec.quad_nodes = 24;
  for (auto _ : state) {
    auto M = assemble_normal_matrix(m, 0, spec);
    benchmark::DoNotOptimize(M.data());
  }
}
BENCHMARK(BM_normal_assembly)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_symmetric_table(benchmark::State& state) {
  const auto m = constant_curvature_metric(0.3, 1.0);
  const PolarGrid g(1.0, 12, 48);
  for (auto _ : state) {
    SymmetricNormalTable table(m, g, 24);
    auto B = table.block(0, 0);
    benchmark::DoNotOptimize(B.data());
  }
}
BENCHMARK(BM_symmetric_table)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
