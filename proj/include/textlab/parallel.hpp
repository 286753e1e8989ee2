#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace textlab {

// Process-wide worker count for parallel_for (CLI --threads). 0 = hardware.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(i) for i in [begin, end) across worker threads in contiguous
// chunks. Callers must make iterations independent (each writes its own
// slot); under that contract results are identical for any thread count.
void parallel_for(size_t begin, size_t end,
                  const std::function<void(size_t)>& fn);

// Runs each job once, in parallel. Jobs must be independent.
void parallel_jobs(const std::vector<std::function<void()>>& jobs);

}  // namespace textlab
