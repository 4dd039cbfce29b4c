#pragma once

#include <vector>

namespace exactwkb::detail {

// Visit every multi-index {r_1..r_max} with sum_j j r_j == target (r[j-1] holds r_j).
template <class F>
void for_each_weighted_partition(int max_part, int target, std::vector<int>& r, int j, F&& f) {
  if (j > max_part) {
    if (target == 0) f(r);
    return;
  }
  for (int count = 0; count * j <= target; ++count) {
    r[j - 1] = count;
    for_each_weighted_partition(max_part, target - count * j, r, j + 1, f);
  }
  r[j - 1] = 0;
}

}  // namespace exactwkb::detail
