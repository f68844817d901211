#pragma once

#include <cstddef>
#include <functional>

namespace tom {

/// Thread count from TOM_THREADS, falling back to hardware concurrency.
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; callers write results into per-index slots so reductions
/// can happen afterwards in index order. The first exception thrown by any
/// body is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace tom
