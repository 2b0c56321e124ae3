#pragma once

#include <cstddef>
#include <functional>

namespace hardylab {

/// Worker count: hardware concurrency, capped by HARDYLAB_THREADS when set.
unsigned thread_budget();

/// Runs body(i) for i in [0, count). Indices are handed out dynamically; the caller
/// must write results into per-index slots so the outcome does not depend on scheduling.
/// The first exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace hardylab
