#pragma once

#include <cstddef>
#include <functional>

namespace fsum {

// FSUM_THREADS if set and positive, otherwise the hardware concurrency.
unsigned default_thread_count();

// Runs body(i) for i in [0, count) across up to `threads` workers.
// Each index is handled exactly once; callers write results per index and reduce in order.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace fsum
