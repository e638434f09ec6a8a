#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hgl {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> threads{0};
  return threads;
}
}  // namespace detail

// 0 means "all hardware threads".
inline void set_default_threads(unsigned threads) { detail::thread_setting() = threads; }

inline unsigned default_threads() {
  unsigned t = detail::thread_setting();
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

// Runs fn(i) for i in [0, count). Work is handed out in index chunks; callers
// write results into per-index slots, so the outcome never depends on the
// number of workers.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = default_threads()) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = std::max<std::size_t>(1, count / (threads * 8));
  auto worker = [&] {
    try {
      while (true) {
        std::size_t begin = next.fetch_add(chunk);
        if (begin >= count) return;
        std::size_t end = std::min(count, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Sum of fn(i) over [0, count), reduced in index order.
template <class T, class Fn>
T parallel_sum(std::size_t count, Fn&& fn, unsigned threads = default_threads()) {
  std::vector<T> parts(count);
  parallel_for(count, [&](std::size_t i) { parts[i] = fn(i); }, threads);
  T total{};
  for (auto& p : parts) total += p;
  return total;
}

}  // namespace hgl
