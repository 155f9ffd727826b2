#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace epicut {

/// Worker count: EPICUT_WORKERS overrides the configured value when set.
inline int effective_workers(int configured) {
  if (const char* env = std::getenv("EPICUT_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return configured >= 1 ? configured : 1;
}

/// Runs f(i) for i in [0, count). With workers > 1 the calls race, so f must
/// only write to per-index slots; callers merge results in index order, which
/// keeps outputs independent of the schedule.
template <class F>
void parallel_for(int count, int workers, F&& f) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const int spawn = std::min(workers, count);
  threads.reserve(spawn);
  for (int t = 0; t < spawn; ++t) threads.emplace_back(body);
  for (std::thread& th : threads) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace epicut
