#include "salem/spectrum.h"

#include <fftw3.h>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "salem/divisors.h"
#include "salem/error.h"
#include "salem/measure.h"
#include "test_util.h"

namespace salem {
namespace {

using testing::Dyadic;
using testing::MakeScenario;

TEST(Fm, EvalExamples) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 1, 0, 1, {4});
  FmFunction fm(s, 4);
  EXPECT_DOUBLE_EQ(fm.eps(), 0.25);
  std::vector<double> x = {1.0 / 3};
  EXPECT_GE(fm.Eval(x), 0.25 * 4 * fm.bump().Factor(0) - 1e-12);
  Scenario tight = MakeScenario(QKind::kAllIntegers, 2, 0, 1, {4});
  std::vector<double> miss = {0.125};
  EXPECT_EQ(FmEval(tight, 4, miss), 0.0);
  double integral = 0;
  const int n = 1 << 16;
  for (int i = 0; i < n; ++i) {
    std::vector<double> xi = {(i + 0.5) / n};
    integral += fm.Eval(xi) / n;
  }
  EXPECT_NEAR(integral, 1.0, 1e-9);
  Scenario sq = MakeScenario(QKind::kSquares, 2, 0, 1, {8});
  EXPECT_THROW(FmFunction(sq, 8), EmptyWindowError);
}

TEST(Fm, HatExamples) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 1, 0, 1, {4});
  FmFunction fm(s, 4);
  EXPECT_EQ(fm.Hat(IntVec{0}), Complex(1, 0));
  EXPECT_EQ(fm.Hat(IntVec{1}), Complex(0, 0));
  EXPECT_EQ(fm.Hat(IntVec{2}), Complex(0, 0));
  // Q(4) = {-4, -3, 3, 4}; only q = +-3 divide 3, each with k = +-1.
  ASSERT_EQ(fm.window().size(), 4u);
  EXPECT_NEAR(std::abs(fm.Hat(IntVec{3}) - 0.5 * fm.bump().FactorHat(0.25)), 0, 1e-15);
  EXPECT_EQ(fm.Hat(IntVec{5}), Complex(0, 0));
}

TEST(Fm, TableStructure) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 1.0 / 3, 4, {16});
  SpectrumTable t = FmHatTable(s, 16, 64);
  EXPECT_EQ(t.At(IntVec{0}), Complex(1, 0));
  for (std::int64_t l = 1; l <= 8; ++l) EXPECT_EQ(t.At(IntVec{l}), Complex(0, 0));
  std::uint64_t bound = 0;
  for (std::uint64_t l = 1; l <= 64; ++l) bound += 2 * Tau(l);
  EXPECT_LE(t.size(), bound + 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    IntVec ell = t.Ell(i), neg = ell;
    for (auto& e : neg) e = -e;
    EXPECT_EQ(t.At(neg), std::conj(t.Value(i)));
    EXPECT_NEAR(std::abs(t.Value(i) - FmHat(s, 16, ell)), 0, 1e-15);
  }
}

TEST(Fm, TableMatchesClosedFormInTwoDimensions) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 0.5, 0.5, 1, {8}, {1 / std::numbers::sqrt2, 1.0 / 3});
  SpectrumTable t = FmHatTable(s, 8, 24);
  FmFunction fm(s, 8);
  for (std::int64_t i = -24; i <= 24; ++i) {
    for (std::int64_t j = -24; j <= 24; ++j) {
      IntVec ell = {i, j};
      ASSERT_NEAR(std::abs(t.At(ell) - fm.Hat(ell)), 0, 1e-15) << i << "," << j;
    }
  }
  EXPECT_THROW(FmHatTable(s, 8, 24, 100), BoxError);
}

TEST(Envelope, Examples) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 1.0 / 3, 4, {32});
  SpectrumTable t = FmHatTable(s, 32, 512);
  double C1 = Bump(1, s.Smoothness()).decay_constant();
  EXPECT_LE(EnvelopeCheck(t, 1.0 / 3, 4, 0.99, C1).max_ratio, C1);
  EXPECT_LE(EnvelopeCheck(t, 0, 1, 1.0, C1).max_ratio, 1.0);
  double prev = INFINITY;
  for (double zeta : {0.7, 0.8, 0.9, 1.0}) {
    double r = EnvelopeCheck(t, 1.0 / 3, 4, zeta, C1).max_ratio;
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(Windowed, IdentityConvolution) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 0, 1, {4});
  Bump chi(1, 4);
  SpectralGrid grid = BumpHatGrid(chi, 8, 8 * 40, 1 << 20);
  // M = 4 with L = 1: only the l = 0 entry is nonzero.
  SpectrumTable t = FmHatTable(s, 4, 1);
  ASSERT_EQ(t.size(), 1u);
  SpectralGrid out = WindowedSpectrum(grid, chi.decay_constant(), 4, t, 8 * 32, 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out.value[i], grid.value[grid.Index(out.Point(i))]);
  }
  EXPECT_THROW(WindowedSpectrum(grid, 1, 4, FmHatTable(s, 4, 16), 8 * 32, 16), BoxError);
}

TEST(Windowed, TailBoundHalving) {
  for (int dim : {1, 2}) {
    for (int K : {4, 6}) {
      for (double s : {0.0, 5.0, 20.0}) {
        for (std::int64_t L : {64, 128, 256}) {
          double ratio = TailBound(dim, K, s, L) / TailBound(dim, K, s, 2 * L);
          EXPECT_GE(ratio, std::pow(2.0, K - dim)) << dim << " " << K << " " << s << " " << L;
        }
      }
    }
  }
  EXPECT_THROW(TailBound(2, 2, 0, 10), DomainError);
}

TEST(Windowed, MatchesFftOfProduct) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 1.5, 1.0 / 3, 4, {8});
  const double M = 8;
  const int R = 8;
  const std::int64_t out_N = 256;
  const std::int64_t L = TruncationMargin(M);
  Bump chi(1, s.Smoothness());
  SpectralGrid chi_grid = BumpHatGrid(chi, R, out_N + R * L, 1 << 22);
  SpectrumTable t = FmHatTable(s, M, L);
  SpectralGrid w = WindowedSpectrum(chi_grid, chi.decay_constant(), s.Smoothness(), t, out_N, L);

  // chi F_M sampled on [-R/2, R/2) with period R, so DFT bins land on (1/R) Z.
  const int N = 1 << 14;
  const double h = static_cast<double>(R) / N;
  FmFunction fm(s, M);
  fftw_complex* buf = fftw_alloc_complex(N);
  for (int i = 0; i < N; ++i) {
    std::vector<double> x = {-R / 2.0 + i * h};
    buf[i][0] = chi.Eval(x) * fm.Eval(x);
    buf[i][1] = 0;
  }
  fftw_plan plan = fftw_plan_dft_1d(N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  double worst = 0;
  for (std::int64_t j = -out_N; j <= out_N; ++j) {
    int k = static_cast<int>((j % N + N) % N);
    double sign = j % 2 == 0 ? 1.0 : -1.0;
    Complex fft(buf[k][0] * h * sign, buf[k][1] * h * sign);
    std::size_t idx = w.Index(IntVec{j});
    double excess = std::abs(fft - w.value[idx]) - (1e-6 + w.error[idx]);
    worst = std::max(worst, excess);
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  EXPECT_LE(worst, 0.0);
}

}  // namespace
}  // namespace salem
