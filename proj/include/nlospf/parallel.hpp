#pragma once
#include <cstddef>
#include <functional>

namespace nlos {

/// Number of worker threads used by parallel loops (default: hardware
/// concurrency). Thread count never changes numeric results.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [0, n) on the configured number of threads.
/// Iterations must be independent; each index is executed exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Runs fn(job) for job in [0, n_jobs); jobs are claimed dynamically.
/// Intended for coarse jobs that are themselves sequential.
void parallel_jobs(std::size_t n_jobs, const std::function<void(std::size_t)>& fn);

}  // namespace nlos
