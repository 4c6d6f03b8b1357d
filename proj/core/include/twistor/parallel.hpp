#pragma once

#include <cstddef>
#include <functional>

namespace twistor {

// Process-wide worker count for parallel_for. 0 means "use hardware count".
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks over a
// fixed number of workers; fn must only write to slots owned by index i so
// results are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace twistor
