#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qldpc {

/// Runs `body(worker, begin, end)` over [0, n) in chunks handed out by an
/// atomic counter. `worker` is in [0, workers). Results must not depend on
/// which worker receives which chunk; callers reduce per-worker state with a
/// commutative operation.
template <typename Body>
void parallel_chunks(std::size_t n, unsigned workers, std::size_t chunk, Body&& body) {
  workers = std::max(1u, workers);
  chunk = std::max<std::size_t>(1, chunk);
  if (workers == 1 || n <= chunk) {
    if (n > 0) body(0u, std::size_t{0}, n);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&](unsigned worker) {
    try {
      while (true) {
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= n) break;
        body(worker, begin, std::min(n, begin + chunk));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qldpc
