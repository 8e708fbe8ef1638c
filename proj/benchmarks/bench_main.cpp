#include <benchmark/benchmark.h>

#include <cmath>

#include "defvar/calculus.hpp"
#include "defvar/catalog.hpp"
#include "defvar/num/kdv.hpp"
#include "defvar/num/sde.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"

using namespace defvar;

static void BM_VerifyAll(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& info : list_systems())
      benchmark::DoNotOptimize(verify(info.id).verdict);
  }
}
BENCHMARK(BM_VerifyAll)->Unit(benchmark::kMillisecond);

static void BM_DeriveKdv(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(derive_system("kdv"));
}
BENCHMARK(BM_DeriveKdv)->Unit(benchmark::kMillisecond);

static void BM_SimplifyDeep(benchmark::State& state) {
  Expr x = sym("x"), y = sym("y");
  Expr e = x + y;
  for (int i = 0; i < 8; ++i) e = simplify(e * e + e);
  for (auto _ : state) benchmark::DoNotOptimize(simplify(e));
}
BENCHMARK(BM_SimplifyDeep)->Unit(benchmark::kMillisecond);

static void BM_ParseRoundTrip(benchmark::State& state) {
  LagrangianSpec spec = build("kdv");
  std::string text = render(spec.lagrangian, Format::Plain);
  for (auto _ : state) benchmark::DoNotOptimize(parse(text));
}
BENCHMARK(BM_ParseRoundTrip);

static void BM_KdvStep(benchmark::State& state) {
  const size_t n = 512;
  const double L = 40.0, dx = L / n;
  std::vector<double> phi0(n);
  for (size_t i = 0; i < n; ++i)
    phi0[i] = num::kdv_soliton(4.0, -L / 2 + dx * i, 0.0);
  for (auto _ : state) {
    auto g = num::simulate_kdv(phi0, -L / 2, dx, 0.02, 2e-4,
                               num::KdvScheme::PseudoSpectral, 2);
    benchmark::DoNotOptimize(g.snapshots.back()[0]);
  }
}
BENCHMARK(BM_KdvStep)->Unit(benchmark::kMillisecond);

static void BM_SbmEnsemble(benchmark::State& state) {
  num::SbmParams p;
  for (auto _ : state) {
    auto st = num::simulate_langevin_sbm(p, 1000, 7, 2.0, 0.01, 20, 0);
    benchmark::DoNotOptimize(st.msd.back());
  }
}
BENCHMARK(BM_SbmEnsemble)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
