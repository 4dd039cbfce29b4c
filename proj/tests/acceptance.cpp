// One line per acceptance criterion; nonzero exit if any fails.
#include <cstdio>

#include "exactwkb/verify.hpp"

int main() {
  using namespace exactwkb;
  const auto results = run_checks();
  int failed = 0;
  for (const auto& r : results) {
    std::printf("criterion %d: %s  %-40s value=%.3e tol=%.0e  (%.1f s) %s\n", r.id, r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.value, r.tolerance, r.seconds, r.detail.c_str());
    std::fflush(stdout);
    failed += !r.passed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
