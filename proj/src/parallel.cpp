#include "nlospf/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace nlos {

namespace {
std::atomic<unsigned> g_threads{0};  // 0 = auto

unsigned effective_threads() {
  unsigned n = g_threads.load();
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}
}  // namespace

void set_thread_count(unsigned n) { g_threads.store(n); }
unsigned thread_count() { return effective_threads(); }

void parallel_jobs(std::size_t n_jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(effective_threads(), n_jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_jobs || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  // Chunked so tiny iterations do not thrash the work counter.
  const std::size_t chunk = std::max<std::size_t>(1, n / (8 * effective_threads() + 1));
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  parallel_jobs(n_chunks, [&](std::size_t c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    for (std::size_t i = lo; i < hi; ++i) fn(i);
  });
}

}  // namespace nlos
