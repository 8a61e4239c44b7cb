#pragma once

#include <cstddef>
#include <functional>

namespace sforge {

// Thread budget for data-parallel loops: hardware concurrency, capped by the
// SOLITON_FORGE_THREADS environment variable. Always at least 1.
int max_threads();

// Runs body(begin, end) over a partition of [0, n). Chunks are assigned in
// index order so reductions done per-chunk and merged in order stay
// deterministic regardless of the thread count.
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sforge
