#pragma once

#include <cstddef>
#include <functional>

namespace sccp {

// Resolves a worker count: `requested` if positive, else the SCCP_THREADS
// environment variable, else hardware concurrency.
unsigned resolve_threads(int requested);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is sharded by
// index, so results written into per-index slots are identical for any
// worker count. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace sccp
