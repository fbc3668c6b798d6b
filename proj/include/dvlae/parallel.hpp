#pragma once

#include <cstddef>
#include <functional>

namespace dvlae {

/// Worker count from DVLAE_WORKERS (default 1, clamped to [1, 256]).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into pre-sized slots so output order never depends on the
/// schedule. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dvlae
