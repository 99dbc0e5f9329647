#pragma once

#include <cstddef>
#include <functional>

namespace jamnet {

// JAMNET_THREADS env var, else hardware concurrency (min 1)
int default_thread_count();

// Runs fn(0..count-1) across a worker pool. Callers keep determinism by
// writing results into per-index slots; aggregation order is theirs.
// The first exception thrown by any index is rethrown after the join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

} // namespace jamnet
