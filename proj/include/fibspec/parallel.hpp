#pragma once

#include <cstddef>
#include <functional>

namespace fibspec {

/// Worker count from FIBSPEC_THREADS; 0 or unset means
/// std::thread::hardware_concurrency().
std::size_t worker_count();

/// Calls body(i) for every i in [0, n), splitting the range into contiguous
/// chunks over `workers` threads (worker_count() when 0). body must only
/// write to per-index state. The first exception thrown by any chunk is
/// rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = 0);

}  // namespace fibspec
