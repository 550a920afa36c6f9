#pragma once

#include <cstddef>
#include <functional>

namespace mdpx {

/// Number of worker threads used by parallel_for. Defaults to the hardware
/// concurrency; the MDPX_WORKERS environment variable overrides the default.
std::size_t worker_count();
void set_worker_count(std::size_t n);

/// Calls body(i) for every i in [0, n), split into contiguous blocks across
/// workers. body must only write to per-index state. The first exception
/// thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mdpx
