#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fracsym {

/// Worker cap for line-parallel operations. Initialized from FRACSYM_THREADS
/// (positive integer) on first use, otherwise 1.
int worker_count();
void set_worker_count(int n);

/// Calls fn(i) for i in [0, n), split into contiguous chunks over at most
/// worker_count() threads. fn must only write state owned by index i, which
/// makes the result independent of the thread count.
template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::ptrdiff_t begin = w * chunk;
    const std::ptrdiff_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::ptrdiff_t i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace fracsym
