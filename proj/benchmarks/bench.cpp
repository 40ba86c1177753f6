#include <benchmark/benchmark.h>

#include "nhminor/covariance.hpp"
#include "nhminor/mde.hpp"
#include "nhminor/resolvent.hpp"
#include "nhminor/simulator.hpp"

using namespace nhminor;

static void BM_SolveM(benchmark::State& state) {
  const auto p = SpectralPoint::on_axis(0.6, cplx(0.3, 0.2), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_m(p));
}
BENCHMARK(BM_SolveM);

static void BM_ThetaForm(benchmark::State& state) {
  const auto f1 = bump(0.1, 0.2), f2 = bump(cplx(0.25, 0.1), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(C_gauss(0.5, f1, 1.0, f2));
}
BENCHMARK(BM_ThetaForm)->Unit(benchmark::kMillisecond);

static void BM_MinorEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix X = sample_matrix(n, EntryLaw::make("gaussian", 2), 1);
  for (auto _ : state) benchmark::DoNotOptimize(minor_eigenvalues(X, {n / 2, n}));
}
BENCHMARK(BM_MinorEigenvalues)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_HermitizationSvd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix X = sample_matrix(n, EntryLaw::make("gaussian", 2), 2);
  for (auto _ : state) benchmark::DoNotOptimize(Hermitization(X, n, cplx(0.1, 0.2), false));
}
BENCHMARK(BM_HermitizationSvd)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_TwoResolventTrace(benchmark::State& state) {
  const Matrix X = sample_matrix(128, EntryLaw::make("gaussian", 2), 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(two_resolvent_trace(X, 64, 0.2, cplx(0.0, 0.2), 128, cplx(0.1, 0.1),
                                                 cplx(0.0, 0.2), Observable::e_plus,
                                                 Observable::e_plus));
}
BENCHMARK(BM_TwoResolventTrace)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
