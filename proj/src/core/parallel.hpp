#pragma once

#include <cstdint>
#include <functional>

namespace commsim {

// Number of worker threads to use for independent-cell evaluation.
// Controlled by the COMMSIM_THREADS environment variable; 0 or unset means
// one thread per hardware core.
int thread_budget();

// Runs body(i) for i in [0, count). Work is split into contiguous chunks,
// one per worker; each index is visited exactly once, so writes to per-index
// slots are race-free and the result does not depend on the thread count.
void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t)>& body);

}  // namespace commsim
