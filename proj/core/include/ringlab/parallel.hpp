#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ringlab {

/// Worker count resolution: RING_JOBS env var wins, then `requested`,
/// then hardware concurrency.
inline int resolve_jobs(int requested) {
  if (const char* env = std::getenv("RING_JOBS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  if (requested >= 1) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count) across `jobs` threads.  Work items must
/// be independent; the first exception (by work index) is rethrown after
/// all workers drain.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::min(std::max(jobs, 1), std::max(count, 1));
  if (jobs == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::mutex error_mutex;
  int first_error_index = count;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < first_error_index) {
          first_error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ringlab
