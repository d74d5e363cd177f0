#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace skewlab {

// Runs fn(i) for i in [0, chunks) on up to `threads` workers. Callers write
// into per-chunk slots and reduce in chunk order, so results never depend on
// the thread count. The first exception is rethrown.
template <class F>
void parallel_chunks(std::size_t chunks, int threads, F&& fn) {
  if (threads <= 1 || chunks <= 1) {
    for (std::size_t i = 0; i < chunks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= chunks || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  std::size_t n = std::min<std::size_t>((std::size_t)threads, chunks);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace skewlab
