#include <benchmark/benchmark.h>

#include "ite/planar.hpp"
#include "ite/radial.hpp"
#include "ite/specfun.hpp"
#include "ite/spectra.hpp"

using namespace ite;

static void BM_CylBessel(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  // start above the order so the second kind stays representable
  const double x0 = 0.5 + m;
  double x = x0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::cyl_bessel(m, x));
    x = x < x0 + 200.0 ? x * 1.01 : x0;
  }
}
BENCHMARK(BM_CylBessel)->Arg(0)->Arg(20)->Arg(200);

static void BM_Dispersion(benchmark::State& state) {
  const auto spec = MediumSpec::disk(1.0, 1.0, 4.0);
  const SeparableModel model(spec);
  const auto c = medium_constants(spec);
  const int m = static_cast<int>(state.range(0));
  double lam = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dispersion_unchecked(model, c, m, lam));
    lam = lam < 2000.0 ? lam * 1.001 : 1.0;
  }
}
BENCHMARK(BM_Dispersion)->Arg(0)->Arg(50);

static void BM_RadialOde(benchmark::State& state) {
  auto spec = MediumSpec::disk(1.0, 1.0, 1.0);
  spec.n = CoefficientProfile::radial("gaussian_bump", {{"base", 2.0}, {"amplitude", 1.0}, {"width", 0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(solve_radial(spec, 3, 50.0).w_R);
}
BENCHMARK(BM_RadialOde);

static void BM_DirichletSpectrum(benchmark::State& state) {
  const auto spec = MediumSpec::disk(1.0, 1.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_spectrum(spec, Operator::plain, 4000.0).size());
}
BENCHMARK(BM_DirichletSpectrum)->Unit(benchmark::kMillisecond);

static void BM_FindItes(benchmark::State& state) {
  const auto spec = state.range(0) == 2 ? MediumSpec::disk(1.0, 1.0, 4.0) : MediumSpec::ball(1.0, 1.0, 4.0);
  FindOptions o;
  o.scan.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(find_ites(spec, 2000.0, o).ites.size());
}
BENCHMARK(BM_FindItes)->Args({2, 1})->Args({3, 1})->Args({2, 4})->Unit(benchmark::kMillisecond);

static void BM_PlanarDtn(benchmark::State& state) {
  CurveSpec ellipse;
  ellipse.family = "ellipse";
  ellipse.b = 0.8;
  const auto curve = BoundaryCurve::sample(ellipse, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_dtn(curve, 3.0, 1.0).symmetry_defect);
}
BENCHMARK(BM_PlanarDtn)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
