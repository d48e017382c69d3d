#pragma once

#include <cstddef>
#include <functional>

namespace patchtrack {

/// Worker count: PATCHTRACK_THREADS if set and > 0, otherwise the hardware
/// concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks across
/// worker_count() threads. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace patchtrack
