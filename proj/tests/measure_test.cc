#include "salem/measure.h"

#include <gtest/gtest.h>

#include <cmath>

#include "salem/error.h"
#include "test_util.h"

namespace salem {
namespace {

using testing::Dyadic;
using testing::MakeScenario;

MeasureOptions SmallGrid() {
  MeasureOptions o;
  o.R = 4;
  o.X = 64;
  o.spatial_points = 1 << 13;
  return o;
}

TEST(Envelope, Examples) {
  Envelope g(1.0 / 3, HFunction::Constant(4));
  EXPECT_EQ(g(1), 1.0);
  EXPECT_EQ(g(0), 1.0);
  double e2 = std::exp(2.0);
  EXPECT_NEAR(g(e2), std::exp(-2.0 / 3) * std::exp(2 / std::log(2.0)) * 4, 1e-12);
  EXPECT_NEAR(g(e2), 36.78, 0.01);
  double ee = std::exp(std::exp(1.0));
  double prev = g(ee * 1000);
  for (double x = ee * 2000; x < 1e12; x *= 2) {
    double v = g(x);
    EXPECT_LT(v, prev) << x;
    prev = v;
  }
}

TEST(Selection, MonotoneInBudget) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 1.0 / 3, 4, Dyadic(1, 20));
  MeasureOptions o = SmallGrid();
  double prev = INFINITY;
  for (double delta : {0.125, 0.25, 0.5, 1.0}) {
    SpectralChain chain(s, o.R, o.grid_cap, o.table_cap);
    Selection sel = SelectMStar(chain, s, delta, 1, o, 1);
    EXPECT_LE(sel.M, prev) << delta;
    EXPECT_LE(sel.max_ratio, 1.0);
    prev = sel.M;
  }
}

TEST(Selection, VerdictStableUnderGridRefinement) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 1.0 / 3, 4, Dyadic(1, 20));
  MeasureOptions coarse = SmallGrid(), fine = SmallGrid();
  fine.R = 8;
  SpectralChain a(s, coarse.R, coarse.grid_cap, coarse.table_cap);
  SpectralChain b(s, fine.R, fine.grid_cap, fine.table_cap);
  EXPECT_EQ(SelectMStar(a, s, 1.0, 1, coarse, 1).M, SelectMStar(b, s, 1.0, 1, fine, 1).M);
}

TEST(Selection, ExhaustedMsetReportsBest) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 1.0 / 3, 4, {2});
  MeasureOptions o = SmallGrid();
  SpectralChain chain(s, o.R, o.grid_cap, o.table_cap);
  try {
    SelectMStar(chain, s, 1e-6, 1, o, 1);
    FAIL() << "expected exhaustion";
  } catch (const MsetExhaustedError& e) {
    EXPECT_EQ(e.level(), 1);
    EXPECT_EQ(e.best_M(), 2);
    EXPECT_GT(e.best_ratio(), 1);
  }
}

class TwoLevels : public ::testing::TestWithParam<double> {};

TEST_P(TwoLevels, BuildInvariants) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 1.0 / 3, 4, Dyadic(1, 20), {GetParam()});
  MeasureBuilder b(s, SmallGrid());
  b.AddLevel();
  b.AddLevel();
  b.AddLevel();
  ASSERT_EQ(b.levels().size(), 3u);
  for (int k = 1; k <= 2; ++k) {
    const MeasureLevel& lv = b.levels()[k];
    EXPECT_EQ(lv.delta, std::ldexp(1.0, -k - 1));
    EXPECT_LE(lv.max_ratio, 1.0);
    if (k == 2) {
      EXPECT_GE(lv.M, 2 * b.levels()[1].M);
    }
    const SpectralGrid& f = lv.fourier;
    double mu0 = f.value[f.Index(IntVec{0})].real();
    EXPECT_GE(mu0, 0.5);
    EXPECT_LE(mu0, 1.5);
    const auto& prev = k == 1 ? b.density0() : b.levels()[k - 1].density;
    ASSERT_EQ(lv.density.size(), prev.size());
    for (std::size_t i = 0; i < prev.size(); ++i) {
      ASSERT_GE(lv.density[i], 0.0);
      if (lv.density[i] > 0) {
        ASSERT_GT(prev[i], 0.0) << "nesting at " << i;
      }
    }
  }
  // Level 1 strips are wider than the density spacing; deeper levels are not.
  EXPECT_NEAR(NormalizedMass(b, 1), 1.0, 1e-6);
  SupportReport sup = SupportCheck(b, 1, b.spacing() * b.levels()[1].M);
  EXPECT_EQ(sup.violations, 0u);
  EXPECT_GT(sup.checked, 0u);
  EXPECT_EQ(sup.outside_mass, 0.0);
  EXPECT_EQ(SupportCheck(b, 2, b.spacing() * b.levels()[1].M).violations, 0u);
  ConvergenceReport conv = ConvergenceCheck(s, b.Ms(), 8, 64, b.options());
  EXPECT_TRUE(conv.pass);
  ASSERT_EQ(conv.levels.size(), 2u);
  EXPECT_GT(conv.envelope_constant, 0.5);
  EXPECT_LE(conv.max_envelope_ratio, conv.envelope_constant);
}

INSTANTIATE_TEST_SUITE_P(Theta, TwoLevels, ::testing::Values(0.0, 0.5));

TEST(Convergence, FlagsInjectedScale) {
  Scenario s = MakeScenario(QKind::kAllIntegers, 2, 1.0 / 3, 4, Dyadic(1, 20));
  MeasureBuilder b(s, SmallGrid());
  b.AddLevel();
  b.AddLevel();
  const MeasureLevel& l1 = b.levels()[1];
  ASSERT_FALSE(l1.trials.empty());
  ConvergenceReport good = ConvergenceCheck(s, {l1.M}, 4, 64, b.options());
  EXPECT_TRUE(good.pass);
  EXPECT_NEAR(good.levels[0].telescoped_ratio, good.levels[0].max_ratio, 1e-12);
  // Any rejected candidate below M_1 must be flagged on re-check.
  for (const auto& t : l1.trials) {
    if (t.pass) continue;
    ConvergenceReport bad = ConvergenceCheck(s, {t.M}, 4, 64, b.options());
    EXPECT_FALSE(bad.pass) << "M=" << t.M;
    EXPECT_FALSE(bad.levels[0].pass);
  }
  EXPECT_GT(l1.trials.size(), 1u);
}

}  // namespace
}  // namespace salem
