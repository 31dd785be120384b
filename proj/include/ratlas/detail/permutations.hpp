#pragma once

#include <numeric>
#include <vector>

namespace ratlas::detail {

/// Visits every permutation of {0..n-1} exactly once (iterative Heap's
/// algorithm) together with its sign. Each Heap step is a single
/// transposition, so the sign flips on every step.
template <class Visitor>
void for_each_permutation(int n, Visitor&& visit) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  int sign = 1;
  visit(static_cast<const std::vector<int>&>(perm), sign);
  int i = 1;
  while (i < n) {
    if (c[i] < i) {
      if (i % 2 == 0)
        std::swap(perm[0], perm[i]);
      else
        std::swap(perm[c[i]], perm[i]);
      sign = -sign;
      visit(static_cast<const std::vector<int>&>(perm), sign);
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
}

}  // namespace ratlas::detail
