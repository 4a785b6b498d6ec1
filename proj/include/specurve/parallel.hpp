#pragma once

#include <cstddef>
#include <functional>

namespace specurve {

/// Runs fn(i) for i in [0, n) on a work-stealing pool of `n_threads` workers.
/// Each index must write only to storage it owns. The first exception thrown
/// by any task is rethrown after all tasks finish.
void parallel_for(std::size_t n, std::size_t n_threads, const std::function<void(std::size_t)>& fn);

}  // namespace specurve
