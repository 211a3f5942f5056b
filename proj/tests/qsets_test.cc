#include "salem/qsets.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "salem/error.h"

namespace salem {
namespace {

std::vector<IntVec> Flat(std::initializer_list<std::int64_t> xs) {
  std::vector<IntVec> out;
  for (auto x : xs) out.push_back({x});
  return out;
}

TEST(Window, AllIntegers) {
  auto w = QSet::Preset(QKind::kAllIntegers).Window(8);
  EXPECT_EQ(w, Flat({-8, -7, -6, -5, 5, 6, 7, 8}));
  EXPECT_EQ(QSet::Preset(QKind::kAllIntegers).WindowSize(8), 8u);
}

TEST(Window, Presets) {
  EXPECT_EQ(QSet::Preset(QKind::kSquares).Window(16), Flat({9, 16}));
  EXPECT_EQ(QSet::Preset(QKind::kPrimes).Window(10), Flat({7}));
  EXPECT_EQ(QSet::Preset(QKind::kSinThreshold).Window(4), Flat({4}));
  EXPECT_EQ(QSet::Preset(QKind::kShiftedPrimes).Window(8), Flat({6, 8}));
  EXPECT_EQ(QSet::Preset(QKind::kPowersOfTwo).Window(8), Flat({8}));
  EXPECT_EQ(QSet::Preset(QKind::kPowersOfTwo).Window(1), Flat({1}));
  EXPECT_TRUE(QSet::Preset(QKind::kSquares).Window(8).empty());
}

TEST(Window, CartesianPowerIsLexicographic) {
  auto w = QSet::Preset(QKind::kSquares, 2).Window(16);
  std::vector<IntVec> expect = {{9, 9}, {9, 16}, {16, 9}, {16, 16}};
  EXPECT_EQ(w, expect);
  auto z = QSet::Preset(QKind::kAllIntegers, 2).Window(4);
  EXPECT_EQ(z.size(), 16u);
  EXPECT_TRUE(std::is_sorted(z.begin(), z.end()));
}

TEST(Window, AgreesWithMembershipForAllPresets) {
  for (QKind kind : {QKind::kAllIntegers, QKind::kPrimes, QKind::kShiftedPrimes, QKind::kSquares,
                     QKind::kPowersOfTwo, QKind::kSinThreshold}) {
    QSet Q = QSet::Preset(kind);
    for (double M : {1.0, 3.0, 10.0, 64.0, 100.5, 256.0}) {
      auto w = Q.Window(M);
      std::vector<IntVec> brute;
      for (std::int64_t t = -256; t <= 256; ++t) {
        IntVec q{t};
        bool in = 2 * std::llabs(t) > M && std::llabs(t) <= M;
        if (in && Q.Contains(q)) brute.push_back(q);
      }
      EXPECT_EQ(w, brute) << QKindName(kind) << " M=" << M;
      EXPECT_EQ(Q.WindowSize(M), w.size());
    }
  }
}

TEST(Window, ExplicitAndFile) {
  QSet e = QSet::Explicit(1, {{5}, {-3}, {5}, {12}});
  EXPECT_EQ(e.payload().size(), 3u);
  EXPECT_EQ(e.Window(5), Flat({-3, 5}));
  EXPECT_EQ(e.Window(6), Flat({5}));
  std::string path = ::testing::TempDir() + "q_file.txt";
  {
    std::ofstream f(path);
    f << "# two-dimensional\n3 4\n-4 3  # tail comment\n\n7 7\n";
  }
  QSet q = QSet::FromFile(2, path);
  std::vector<IntVec> expect = {{-4, 3}, {3, 4}};
  EXPECT_EQ(q.Window(4), expect);
  EXPECT_THROW(QSet::FromFile(2, path + ".missing"), InputError);
  EXPECT_THROW(QSet::Explicit(2, {{1}}), InputError);
}

TEST(Epsilon, Examples) {
  QSet Z = QSet::Preset(QKind::kAllIntegers);
  EXPECT_DOUBLE_EQ(Epsilon(Z, Psi::Power(2), 8), 1.0 / 64);
  EXPECT_DOUBLE_EQ(Epsilon(Z, Psi::Power(1.5), 2), std::pow(2.0, -1.5));
  EXPECT_NEAR(Epsilon(Z, Psi::HinokumaShiga(1), 4), std::fabs(std::sin(3.0)) / 3, 1e-15);
  EXPECT_NEAR(Epsilon(Z, Psi::HinokumaShiga(1), 4), 0.04704, 1e-5);
  EXPECT_THROW(Epsilon(QSet::Preset(QKind::kSquares), Psi::Power(2), 8), EmptyWindowError);
}

TEST(Epsilon, IsAMinimumOverTheWindow) {
  for (QKind kind : {QKind::kAllIntegers, QKind::kPrimes, QKind::kSinThreshold}) {
    QSet Q = QSet::Preset(kind);
    Psi psi = Psi::HinokumaShiga(1.5);
    for (double M : {16.0, 64.0, 256.0}) {
      double eps = Epsilon(Q, psi, M);
      bool attained = false;
      for (const auto& q : Q.Window(M)) {
        EXPECT_LE(eps, psi(q));
        attained = attained || eps == psi(q);
      }
      EXPECT_TRUE(attained);
    }
  }
}

TEST(Psi, Conventions) {
  EXPECT_EQ(Psi::Power(2)(IntVec{0}), 1.0);
  EXPECT_EQ(Psi::Power(2)(IntVec{3, -4}), 1.0 / 16);
  Psi t = Psi::Tabulated({0.5, 0.25, 0.1});
  EXPECT_EQ(t.Radial(3), 0.1);
  EXPECT_THROW(t.Radial(4), InputError);
  EXPECT_THROW(Psi::Tabulated({0.5, 0.0}), InputError);
  Psi c = Psi::Custom([](std::span<const std::int64_t> q) { return 1.0 / (1.0 + q[0] * q[0]); }, "lorentz");
  EXPECT_EQ(c(IntVec{2}), 0.2);
  EXPECT_THROW(c.Radial(2), InputError);
}

TEST(HFunction, Families) {
  EXPECT_EQ(HFunction::Constant(4)(1e9), 4);
  EXPECT_NEAR(HFunction::Log(2, 1)(std::exp(1.0) - 1), 2.0, 1e-15);
  HFunction t = HFunction::Table({1, 10}, {1, 5});
  EXPECT_EQ(t(0.5), 1);
  EXPECT_NEAR(t(5.5), 3, 1e-15);
  EXPECT_EQ(t(100), 5);
  EXPECT_TRUE(t.IsNondecreasing());
  EXPECT_THROW(HFunction::Table({1, 10}, {5, 1}), InputError);
  EXPECT_THROW(HFunction::Constant(0), InputError);
}

Scenario Jarnik(double a, HFunction h, std::vector<double> Mset) {
  Scenario s;
  s.Q = QSet::Preset(QKind::kAllIntegers);
  s.psi = Psi::Power(2);
  s.a = a;
  s.h = h;
  s.Mset = std::move(Mset);
  return s;
}

TEST(Certify, Examples) {
  CertReport r = CertifyScenario(Jarnik(1.0 / 3, HFunction::Constant(4), {8}));
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.entries[0].window_size, 8u);
  EXPECT_NEAR(r.entries[0].lhs, 8.0, 1e-12);
  EXPECT_NEAR(r.entries[0].rhs, 2.0, 1e-12);

  Scenario sq = Jarnik(1.0 / 6, HFunction::Constant(10), {16});
  sq.Q = QSet::Preset(QKind::kSquares);
  r = CertifyScenario(sq);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.entries[0].lhs, 2 * std::pow(16.0, -1.0 / 3) * 10, 1e-12);
  EXPECT_NEAR(r.entries[0].lhs, 7.94, 0.01);
  EXPECT_NEAR(r.entries[0].rhs, 1.587, 0.001);
}

TEST(Certify, DegenerateExponentAndEmptyWindow) {
  Scenario s = Jarnik(0, HFunction::Constant(1), {1, 2, 4, 8, 1000});
  s.Q = QSet::Preset(QKind::kPrimes);
  CertReport r = CertifyScenario(s);
  EXPECT_FALSE(r.entries[0].pass);  // (1/2, 1] holds no prime
  EXPECT_FALSE(r.entries[0].reason.empty());
  for (std::size_t i = 1; i < r.entries.size(); ++i) EXPECT_TRUE(r.entries[i].pass);
  EXPECT_FALSE(r.pass);
}

TEST(Certify, MonotoneInH) {
  std::vector<double> Mset = {2, 4, 8, 16, 32, 64, 128, 1024};
  for (double c : {0.1, 0.5, 1.0, 2.0}) {
    CertReport lo = CertifyScenario(Jarnik(0.5, HFunction::Constant(c), Mset));
    CertReport hi = CertifyScenario(Jarnik(0.5, HFunction::Constant(2 * c), Mset));
    for (std::size_t i = 0; i < lo.entries.size(); ++i) {
      if (lo.entries[i].pass) {
        EXPECT_TRUE(hi.entries[i].pass) << "c=" << c << " M=" << Mset[i];
      }
      EXPECT_GE(hi.entries[i].margin, lo.entries[i].margin);
    }
  }
}

TEST(Scenario, ValidateAndSmoothness) {
  Scenario s = Jarnik(1.0 / 3, HFunction::Constant(4), {2, 4});
  EXPECT_NO_THROW(s.Validate());
  EXPECT_EQ(s.Smoothness(), 4);
  s.K = 1;
  EXPECT_THROW(s.Validate(), InputError);
  s.K = 0;
  s.Mset = {4, 2};
  EXPECT_THROW(s.Validate(), InputError);
  s.Mset = {2};
  s.theta = {0, 0};
  EXPECT_THROW(s.Validate(), InputError);
}

TEST(Nu, Presets) {
  auto nu = [](QKind k) { return EstimateNu(QSet::Preset(k), DefaultNuExponents(), 1e6).nu; };
  EXPECT_NEAR(nu(QKind::kAllIntegers), 1.0, 0.05);
  EXPECT_NEAR(nu(QKind::kSquares), 0.5, 0.05);
  EXPECT_NEAR(nu(QKind::kPowersOfTwo), 0.0, 0.05);
  EXPECT_NEAR(nu(QKind::kPrimes), 1.0, 0.05);
  EXPECT_THROW(EstimateNu(QSet::Preset(QKind::kAllIntegers), DefaultNuExponents(), 100), InputError);
  EXPECT_THROW(EstimateNu(QSet::Explicit(1, {{5}, {9}}), DefaultNuExponents(), 1e4), InsufficientDataError);
}

}  // namespace
}  // namespace salem
