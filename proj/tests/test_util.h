#ifndef SALEM_TESTS_TEST_UTIL_H_
#define SALEM_TESTS_TEST_UTIL_H_

#include <cmath>
#include <vector>

#include "salem/qsets.h"

namespace salem::testing {

inline std::vector<double> Dyadic(int lo, int hi) {
  std::vector<double> out;
  for (int j = lo; j <= hi; ++j) out.push_back(std::ldexp(1.0, j));
  return out;
}

inline Scenario MakeScenario(QKind kind, double tau, double a, double h, std::vector<double> Mset,
                             std::vector<double> theta = {0.0}) {
  Scenario s;
  s.m = static_cast<int>(theta.size());
  s.Q = QSet::Preset(kind);
  s.psi = Psi::Power(tau);
  s.theta = std::move(theta);
  s.a = a;
  s.h = HFunction::Constant(h);
  s.Mset = std::move(Mset);
  return s;
}

}  // namespace salem::testing

#endif  // SALEM_TESTS_TEST_UTIL_H_
