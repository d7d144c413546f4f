#pragma once

#include <cstddef>
#include <functional>

namespace fracfem {

/// Worker count: FRACFEM_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// is visited exactly once; callers write results into slot i, so output
/// never depends on scheduling. The first exception thrown is rethrown.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned max_workers = 0);

}  // namespace fracfem
