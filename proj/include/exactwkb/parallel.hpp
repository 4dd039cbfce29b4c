#pragma once

#include <functional>

namespace exactwkb {

// Worker count: hardware concurrency, capped by EXACTWKB_THREADS when set.
int thread_budget();

// Runs body(i) for i in [0, n) over up to thread_budget() threads. Each index is written
// by exactly one call so results do not depend on scheduling. The first exception is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace exactwkb
