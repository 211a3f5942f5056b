#ifndef SALEM_TOOLS_VERIFY_H_
#define SALEM_TOOLS_VERIFY_H_

#include <string>
#include <vector>

#include "salem/scenario_io.h"

namespace salem::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  Json details;
  double seconds = 0;
};

// Criteria 1..8.
CriterionResult RunCriterion(int id);
const char* CriterionName(int id);

// structural, oracle, envelope, measure, dimension, property, all.
std::vector<int> SuiteCriteria(const std::string& suite);
const std::vector<std::string>& SuiteNames();

// One line: "[PASS] 3 divisor correctness: ... (1.2 s)".
std::string FormatLine(const CriterionResult& r);

// Relative sup error between an FFT of F_M sampled on `points` per axis
// and the closed-form table on |l| <= L_cmp. Supports mn = 1 and mn = 2.
struct OracleComparison {
  double rel_error = 0;
  double max_abs_error = 0;
  std::size_t compared = 0;
};
OracleComparison CompareWithFft(const Scenario& s, double M, int points, std::int64_t L_cmp);

}  // namespace salem::verify

#endif  // SALEM_TOOLS_VERIFY_H_
