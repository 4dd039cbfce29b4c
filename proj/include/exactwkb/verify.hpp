#pragma once

#include <string>
#include <vector>

#include "exactwkb/quantize.hpp"

namespace exactwkb {

struct CheckResult {
  int id = 0;
  std::string name;
  double value = 0.0;      // worst observed deviation
  double tolerance = 0.0;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

// The end-to-end cross-check battery: library results against the ODE oracle and
// the closed forms. ids run 1..9; an empty list means all of them.
std::vector<CheckResult> run_checks(const std::vector<int>& ids = {}, const FixedPointConfig& config = {});

int check_count();

}  // namespace exactwkb
