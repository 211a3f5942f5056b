#include "salem/divisors.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "salem/error.h"

namespace salem {
namespace {

TEST(Tau, Examples) {
  EXPECT_EQ(Tau(1), 1u);
  EXPECT_EQ(Tau(12), 6u);
  EXPECT_EQ(Tau(720720), 240u);
  EXPECT_EQ(Tau(1u << 20), 21u);
  EXPECT_THROW(Tau(0), DomainError);
  EXPECT_EQ(Divisors(12), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12}));
}

TEST(Tau, SieveMatchesTrialDivision) {
  TauSieve sieve(5000);
  for (std::uint32_t l = 1; l <= 5000; ++l) ASSERT_EQ(sieve[l], Tau(l)) << l;
  std::string path = ::testing::TempDir() + "tau_5000.bin";
  sieve.Save(path);
  auto loaded = TauSieve::Load(path, 5000);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ((*loaded)[4680], sieve[4680]);
  EXPECT_FALSE(TauSieve::Load(path, 6000).has_value());
}

TEST(Wigert, Examples) {
  EXPECT_NEAR(WigertRatio(17), std::log(2.0) * std::log(std::log(17.0)) / std::log(17.0), 1e-15);
  EXPECT_NEAR(WigertRatio(17), 0.2548, 1e-4);
  const double l = std::log(720720.0);
  EXPECT_NEAR(WigertRatio(720720), std::log(240.0) * std::log(l) / l, 1e-15);
  EXPECT_NEAR(WigertRatio(720720), 1.056, 2e-3);
  EXPECT_NEAR(WigertRatio(1u << 20), 0.578, 1e-3);
  EXPECT_THROW(WigertRatio(15), DomainError);
}

TEST(Wigert, ScanFindsHighlyCompositeMaximum) {
  TauSieve sieve(1'000'000);
  WigertScan scan = ScanWigert(sieve, 16, 1'000'000, {0.99, 1.5});
  EXPECT_EQ(scan.argmax, 720720u);
  EXPECT_NEAR(scan.max_ratio, WigertRatio(720720), 1e-12);
  ASSERT_EQ(scan.thresholds.size(), 2u);
  EXPECT_LE(scan.thresholds[0].L_zeta, 1'000'000u);
  EXPECT_GT(scan.thresholds[0].L_zeta, 720720u);
  EXPECT_EQ(scan.thresholds[1].L_zeta, 16u);
}

TEST(DivisorSet, Examples) {
  auto k = DivisorSetContains(IntVec{3}, DivisorQuery{1, 1, {6}});
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(*k, IntVec{2});
  // Columns (4, 6) and (6, 9), flattened row-major.
  k = DivisorSetContains(IntVec{2, 3}, DivisorQuery{2, 2, {4, 6, 6, 9}});
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(*k, (IntVec{2, 3}));
  EXPECT_FALSE(DivisorSetContains(IntVec{2, 3}, DivisorQuery{1, 2, {3, 2}}).has_value());
  EXPECT_THROW(DivisorSetContains(IntVec{0}, DivisorQuery{1, 1, {6}}), DomainError);
}

TEST(DivisorWindow, Examples) {
  QSet Z = QSet::Preset(QKind::kAllIntegers);
  EXPECT_EQ(DivisorWindow(DivisorQuery{1, 1, {6}}, Z, 4), (std::vector<IntVec>{{-3}, {3}}));
  EXPECT_TRUE(DivisorWindow(DivisorQuery{1, 1, {5}}, Z, 4).empty());
  EXPECT_TRUE(DivisorWindow(DivisorQuery{1, 2, {4, 6}}, QSet::Preset(QKind::kAllIntegers, 2), 4).empty());
  EXPECT_EQ(DivisorWindow(DivisorQuery{1, 1, {0}}, Z, 8), Z.Window(8));
}

TEST(DivisorWindow, MatchesBruteForceOnRandomQueries) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + static_cast<int>(rng() % 2);
    int n = 1 + static_cast<int>(rng() % 2);
    QSet Q = QSet::Preset(trial % 3 == 0 ? QKind::kSquares : QKind::kAllIntegers, n);
    double M = n == 1 ? 64 : 12;
    DivisorQuery query{m, n, IntVec(m * n)};
    if (trial % 2 == 0) {
      // Rank one, so the set is usually nonempty.
      auto window = Q.Window(M);
      if (window.empty()) continue;
      const IntVec& q = window[rng() % window.size()];
      for (int i = 0; i < m; ++i) {
        std::int64_t ki = static_cast<std::int64_t>(rng() % 7) - 3;
        for (int j = 0; j < n; ++j) query.ell[i * n + j] = ki * q[j];
      }
    } else {
      for (auto& e : query.ell) e = static_cast<std::int64_t>(rng() % 121) - 60;
    }
    std::vector<IntVec> brute;
    for (const auto& q : Q.Window(M)) {
      if (DivisorSetContains(q, query)) brute.push_back(q);
    }
    EXPECT_EQ(DivisorWindow(query, Q, M), brute) << "trial " << trial;
  }
}

}  // namespace
}  // namespace salem
