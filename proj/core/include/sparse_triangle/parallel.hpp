#pragma once

#include <cstddef>
#include <functional>

namespace sparse_triangle {

/// Worker count from SPARSE_TRIANGLE_THREADS; 0 or unset means hardware concurrency.
std::size_t default_thread_count();

/// Runs task(i) for i in [0, count) on up to `threads` workers (0 = default_thread_count()).
/// Tasks must write only to their own output slot; the first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task,
                  std::size_t threads = 0);

}  // namespace sparse_triangle
