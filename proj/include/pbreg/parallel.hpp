#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pbreg {

// Worker-count policy: an explicit request wins, then the PBREG_JOBS environment
// variable, then the hardware concurrency (at least 1).
inline unsigned default_jobs(unsigned requested = 0) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv("PBREG_JOBS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) {
      return static_cast<unsigned>(parsed);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs body(i) for i in [0, count) on `jobs` threads with atomic work stealing.
// The first exception (by completion order) is rethrown on the caller's thread
// after all workers join; remaining work is abandoned once a failure is seen.
// Callers that need deterministic output must write results into per-index slots.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  if (count == 0) {
    return;
  }
  jobs = static_cast<unsigned>(
      std::min<std::size_t>(std::max(1u, jobs), count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) {
        return;
      }
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) {
        return;
      }
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back(worker);
  }
  for (auto& th : pool) {
    th.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace pbreg
