#pragma once

// Static-chunk parallel map over sample indices. Results come back in index
// order, so reductions over them do not depend on the thread count.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "mhm/error.hpp"

namespace mhm {

/// Worker count: MHM_THREADS if set (a positive integer), otherwise the
/// hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("MHM_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw Error(Errc::config, "MHM_THREADS must be a positive integer, got '" + std::string(env) + "'");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class R, class F>
std::vector<R> parallel_map(std::int64_t n, F&& f, unsigned threads = thread_count()) {
  std::vector<R> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  if (n <= 0) return out;
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(std::max(1u, threads), n));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::int64_t lo = n * w / workers, hi = n * (w + 1) / workers;
      try {
        for (std::int64_t i = lo; i < hi; ++i) out[i] = f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace mhm
