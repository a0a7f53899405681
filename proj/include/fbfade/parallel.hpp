#pragma once

#include <cstddef>
#include <functional>

namespace fbfade {

/// Number of worker threads: hardware concurrency, capped by the FB_THREADS environment variable.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is processed exactly
/// once; callers write results into per-index slots so the outcome does not depend on scheduling.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fbfade
