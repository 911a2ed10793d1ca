#pragma once

#include <cstddef>
#include <functional>

namespace nceig {

// Worker cap from NCEIG_THREADS (0 or unset-but-single-core = sequential);
// defaults to the hardware concurrency when the variable is absent.
unsigned worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads.
// Iterations must be independent. The first exception thrown (lowest
// index) is rethrown after all workers join. Calls nested inside a
// running parallel_for execute sequentially on the calling worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nceig
