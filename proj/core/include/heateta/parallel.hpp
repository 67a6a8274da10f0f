#ifndef HEATETA_PARALLEL_HPP
#define HEATETA_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heateta {

// Worker count: HEATETA_THREADS wins when set (ceiling 64 — containers often
// misreport the hardware, so an explicit request is honored even above it);
// unset or malformed falls back to the hardware count.
inline int worker_count() {
  if (const char* s = std::getenv("HEATETA_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end && *end == '\0' && v >= 1) return (int)(v < 64 ? v : 64);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : (int)hw;
}

// Applies f to 0..count-1 across workers and returns the results in index
// order, so the output is identical for every worker count. The first
// exception wins and is rethrown on the calling thread.
template <typename R, typename F>
std::vector<R> parallel_map(int count, F f) {
  std::vector<R> out((size_t)count);
  int workers = worker_count();
  if (workers > count) workers = count;
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto run = [&] {
    try {
      for (int i; (i = next.fetch_add(1)) < count;) out[i] = f(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!err) err = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 0; t + 1 < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace heateta

#endif
