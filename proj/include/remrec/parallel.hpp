#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace remrec {

// Worker-pool size handed down from the CLI (--jobs). jobs == 1 runs inline.
struct ExecutionContext {
  unsigned jobs = 1;
};

// Calls fn(i) for i in [0, n) on up to ctx.jobs threads. Callers write into
// per-index slots and merge afterwards, so ordering never depends on
// scheduling. The first exception thrown by any fn is rethrown.
template <class Fn>
void parallel_for(const ExecutionContext& ctx, std::size_t n, Fn&& fn) {
  unsigned workers = std::max(1u, ctx.jobs);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(n);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace remrec
