#pragma once

#include <cstddef>
#include <functional>

namespace ampgdf {

/// Worker count from AMP_GDF_THREADS, else the hardware concurrency (>= 1).
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on at most `threads` workers (0 means
/// default_thread_count()). Items must not share mutable state. The first
/// exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace ampgdf
