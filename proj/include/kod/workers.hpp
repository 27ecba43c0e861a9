// Fixed-size worker pool for independent jobs; results are returned in job
// order regardless of completion order.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "kod/errors.hpp"

namespace kod {

/// Worker count from KOD_WORKERS, else the hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("KOD_WORKERS")) {
    std::string s(env);
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || v < 1 || v > 1024)
      throw ValidationError("KOD_WORKERS must be an integer in 1..1024, got '" + s + "'");
    return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(0..n-1) on up to `workers` threads. The first exception (by job
/// index) is rethrown after all jobs finish.
template <class R>
std::vector<R> parallel_map(size_t n, int workers, const std::function<R(size_t)>& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const size_t threads = std::min<size_t>(n, static_cast<size_t>(std::max(1, workers)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace kod
