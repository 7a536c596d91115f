#pragma once
// Minimal deterministic work partitioning. Callers must write results into
// per-index slots (or use integer counters); never accumulate floating-point
// sums across threads, or results would depend on the thread count.

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace ccf {

inline int hardware_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(std::min(h, 16u));
}

// invokes fn(lo, hi) over a disjoint cover of [0, n); min_per_thread trades
// spawn overhead against per-item cost (use 1 for heavy items)
inline void parallel_chunks(long long n, const std::function<void(long long, long long)>& fn,
                            long long min_per_thread = 1024) {
  if (min_per_thread < 1) min_per_thread = 1;
  int nt = static_cast<int>(std::min<long long>(hardware_threads(), (n + min_per_thread - 1) / min_per_thread));
  if (nt < 1) nt = 1;
  const long long chunk = (n + nt - 1) / nt;
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) {
    const long long lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace ccf
