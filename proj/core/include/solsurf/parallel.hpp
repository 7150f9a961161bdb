#pragma once

#include <cstddef>
#include <functional>

namespace solsurf {

// Worker count: SOLSURF_THREADS if set and positive, else hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Calls fn(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
// so per-index writes need no synchronisation.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace solsurf
