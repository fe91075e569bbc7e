#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace amk {

/// Worker count: hardware concurrency, capped by the AMK_THREADS environment variable when set.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AMK_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // an unparsable cap leaves the hardware default in place
    }
  }
  return hw;
}

/**
 * @brief Runs body(i) for i in [0, count) on a bounded set of threads.
 *
 * Each index is visited exactly once. The first exception thrown by any body is
 * rethrown on the calling thread after all workers have joined.
 */
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Maps body over [0, count) in parallel and returns the results in index order.
template <class T, class Body>
std::vector<T> parallel_map(std::size_t count, Body&& body) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = body(i); });
  return out;
}

}  // namespace amk
