#include "berezin/hls.hpp"
#include "berezin/kernel.hpp"
#include "berezin/matgroup.hpp"
#include "berezin/ospos.hpp"
#include "berezin/rspace.hpp"
#include "berezin/transforms.hpp"

#include <benchmark/benchmark.h>

using namespace berezin;

static void BM_EtaSpectrum(benchmark::State& state) {
  double l = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transforms::eta_spectrum(2, 7, l));
    l += 1e-9;
  }
}
BENCHMARK(BM_EtaSpectrum);

static void BM_MeasureSpectrumCircle(benchmark::State& state) {
  const auto grid = transforms::SphereGrid::circle(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transforms::measure_spectrum(3.0, grid, 4));
}
BENCHMARK(BM_MeasureSpectrumCircle)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_MeasureSpectrumSphere(benchmark::State& state) {
  const auto grid = transforms::SphereGrid::sphere2(128, 256);
  for (auto _ : state) benchmark::DoNotOptimize(transforms::measure_spectrum(4.5, grid, 4));
}
BENCHMARK(BM_MeasureSpectrumSphere)->Unit(benchmark::kMillisecond);

static void BM_KappaBall(benchmark::State& state) {
  const auto fam = rspace::FamilySpec::ball(3);
  const auto pts = rspace::sample_orbit_coords(fam, {0, 1, 0}, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::kappa({fam, -0.5}, pts[0], pts[1]));
}
BENCHMARK(BM_KappaBall);

static void BM_KappaViaGroupSiegel(benchmark::State& state) {
  const auto fam = rspace::FamilySpec::siegel(2);
  const auto pts = rspace::sample_orbit_coords(fam, rspace::make_label(fam, 0), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::kappa_via_group({fam, -0.5}, pts[0], pts[1]));
}
BENCHMARK(BM_KappaViaGroupSiegel);

static void BM_GramCertify(benchmark::State& state) {
  const auto fam = rspace::FamilySpec::ball(2);
  const auto pts = rspace::sample_orbit_coords(fam, {0, 1, 0}, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::gram({fam, -0.5}, pts));
}
BENCHMARK(BM_GramCertify)->Arg(64)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_GnsQuotient(benchmark::State& state) {
  const auto fam = rspace::FamilySpec::ball(2);
  const auto pts = rspace::sample_orbit_coords(fam, {0, 1, 0}, 64, 4);
  for (auto _ : state) benchmark::DoNotOptimize(ospos::gns_quotient(pts, {fam, -0.5}));
}
BENCHMARK(BM_GnsQuotient)->Unit(benchmark::kMillisecond);

static void BM_Decompose(benchmark::State& state) {
  matgroup::Rng rng(5);
  const auto g = matgroup::random_sl(2, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(matgroup::nbar_man_decompose(g));
}
BENCHMARK(BM_Decompose);

static void BM_ILambdaLine(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  auto f = hls::GridFunction::line(-1.0 + 1.0 / cells, 2.0 / cells, cells);
  f.sample([](double x, double) { return 1.0 - x * x; });
  for (auto _ : state) benchmark::DoNotOptimize(hls::i_lambda(f, f, 0.5));
}
BENCHMARK(BM_ILambdaLine)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_ILambdaPlane(benchmark::State& state) {
  auto f = hls::GridFunction::plane({-0.95, -0.95}, 0.1, {20, 20});
  f.sample([](double x, double y) { return 1.0 - x * x - y * y; });
  for (auto _ : state) benchmark::DoNotOptimize(hls::i_lambda(f, f, 1.0));
}
BENCHMARK(BM_ILambdaPlane)->Unit(benchmark::kMillisecond);

static void BM_OptimizerRayleigh(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hls::optimizer_rayleigh(0.5, 100.0, 0.1));
}
BENCHMARK(BM_OptimizerRayleigh)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
