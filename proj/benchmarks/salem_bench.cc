#include <benchmark/benchmark.h>

#include <cmath>

#include "salem/bump.h"
#include "salem/divisors.h"
#include "salem/measure.h"
#include "salem/spectrum.h"

namespace salem {
namespace {

Scenario Jarnik(double tau) {
  Scenario s;
  s.Q = QSet::Preset(QKind::kAllIntegers);
  s.psi = Psi::Power(tau);
  s.a = 1.0 / 3;
  s.h = HFunction::Constant(4);
  for (int j = 1; j <= 24; ++j) s.Mset.push_back(std::ldexp(1.0, j));
  return s;
}

void BM_FmHatTable(benchmark::State& state) {
  Scenario s = Jarnik(2);
  const double M = static_cast<double>(state.range(0));
  Bump warm(s.mn(), s.Smoothness());  // fills the C1 cache
  for (auto _ : state) benchmark::DoNotOptimize(FmHatTable(s, M, 16 * static_cast<std::int64_t>(M)).size());
}
BENCHMARK(BM_FmHatTable)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_FmHatTable2d(benchmark::State& state) {
  Scenario s = Jarnik(0.5);
  s.m = 2;
  s.theta = {0.0, 0.0};
  s.a = 0.5;
  const double M = static_cast<double>(state.range(0));
  Bump warm(s.mn(), s.Smoothness());
  for (auto _ : state) benchmark::DoNotOptimize(FmHatTable(s, M, 4 * static_cast<std::int64_t>(M)).size());
}
BENCHMARK(BM_FmHatTable2d)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WindowedSpectrum(benchmark::State& state) {
  Scenario s = Jarnik(2);
  const double M = static_cast<double>(state.range(0));
  const int R = 8;
  const std::int64_t out_N = 512 * R;
  const std::int64_t L = TruncationMargin(M);
  Bump chi(1, s.Smoothness());
  SpectralGrid grid = BumpHatGrid(chi, R, out_N + R * L, std::size_t{1} << 24);
  SpectrumTable t = FmHatTable(s, M, L);
  for (auto _ : state) {
    SpectralGrid w = WindowedSpectrum(grid, chi.decay_constant(), s.Smoothness(), t, out_N, L);
    benchmark::DoNotOptimize(w.value.data());
  }
  state.counters["terms"] = static_cast<double>(t.size());
}
BENCHMARK(BM_WindowedSpectrum)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_TauSieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    TauSieve sieve(limit);
    benchmark::DoNotOptimize(sieve[limit]);
  }
}
BENCHMARK(BM_TauSieve)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_BumpFactorHat(benchmark::State& state) {
  Bump b(1, static_cast<int>(state.range(0)));
  double xi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.FactorHat(xi));
    xi += 1e-3;
  }
}
BENCHMARK(BM_BumpFactorHat)->Arg(4)->Arg(8);

void BM_PeriodizedFactor(benchmark::State& state) {
  Bump b(1, 4);
  double y = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.PeriodizedFactor(0.01, y));
    y += 1e-4;
  }
}
BENCHMARK(BM_PeriodizedFactor);

void BM_DecayConstant(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ComputeDecayConstant(static_cast<int>(state.range(0)), 4096.0));
}
BENCHMARK(BM_DecayConstant)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace salem

BENCHMARK_MAIN();
