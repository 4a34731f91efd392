#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace urt {

/// Resolves a thread-count request: n > 0 is taken as-is, n <= 0 falls
/// back to the URT_THREADS environment variable, then to the hardware
/// concurrency (at least 1).
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("URT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(begin, end) over a static partition of [0, total) on
/// `threads` workers. Callers own determinism: work item i must depend
/// only on i (e.g. via Rng::substream), never on the partition.
inline void parallel_for(std::size_t total, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  const int n = resolve_threads(threads);
  if (n <= 1 || total <= 1) {
    fn(0, total);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(n), total);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace urt
