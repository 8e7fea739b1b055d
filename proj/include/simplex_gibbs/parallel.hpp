#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace simplex_gibbs {

// Runs fn(0), ..., fn(count - 1) on a small thread pool and returns the
// results in index order. Each call must depend only on its index, so the
// output does not depend on scheduling. The first exception is rethrown.
template <typename Fn>
auto parallel_map(std::size_t count, Fn fn, std::size_t threads = 0)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out;
  out.reserve(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) out.push_back(fn(k));
    return out;
  }
  // Slots so that results need not be default-constructible.
  std::vector<std::optional<Result>> results(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        results[k].emplace(fn(k));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace simplex_gibbs
