// Acceptance runner: one line per criterion, exit 0 only when all pass.
//   salem_acceptance [--criterion N]...

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "verify.h"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      int id = std::atoi(argv[++i]);
      if (id < 1 || id > 8) {
        std::cerr << "criterion must be 1..8\n";
        return 2;
      }
      ids.push_back(id);
    } else {
      std::cerr << "usage: " << argv[0] << " [--criterion N]...\n";
      return 2;
    }
  }
  if (ids.empty()) ids = salem::verify::SuiteCriteria("all");
  bool pass = true;
  for (int id : ids) {
    salem::verify::CriterionResult r = salem::verify::RunCriterion(id);
    std::cout << salem::verify::FormatLine(r) << std::endl;
    pass = pass && r.pass;
  }
  return pass ? 0 : 1;
}
