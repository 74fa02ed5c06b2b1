#pragma once

// Replicate-parallel loop. Work items write into their own slots, so results
// never depend on the thread count or scheduling; reductions happen after
// the join in replicate order.

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cdpre {

inline int effective_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Calls fn(thread_index, begin, end) on static chunks of [0, count).
inline void parallel_chunks(std::int64_t count, int threads,
                            const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
  threads = effective_threads(threads);
  if (count <= 0) return;
  if (threads == 1 || count == 1) {
    fn(0, 0, count);
    return;
  }
  if (static_cast<std::int64_t>(threads) > count) threads = static_cast<int>(count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int ti = 0; ti < threads; ++ti) {
    const std::int64_t lo = ti * chunk;
    const std::int64_t hi = std::min(count, lo + chunk);
    pool.emplace_back([&, ti, lo, hi] {
      try {
        if (lo < hi) fn(ti, lo, hi);
      } catch (...) {
        errors[static_cast<std::size_t>(ti)] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& ep : errors)
    if (ep) std::rethrow_exception(ep);
}

}  // namespace cdpre
