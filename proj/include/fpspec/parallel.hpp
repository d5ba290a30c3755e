#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace fpspec::detail {

/// Static-partition parallel loop over [0, n). The partition is fixed, so
/// results are bit-identical regardless of scheduling.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::max(1, std::min(hw, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([=, &fn]() {
      for (int i = t; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace fpspec::detail
