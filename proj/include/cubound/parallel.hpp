#pragma once

#include <cstddef>
#include <functional>

namespace cubound {

/// Worker count: hardware concurrency, capped by CU_BOUND_THREADS if set.
std::size_t worker_count();

/// Splits [0, n) into at most worker_count() contiguous chunks and runs
/// fn(chunk, begin, end) for each, one thread per chunk. Chunk boundaries
/// depend only on n and the worker count.
/// Chunks hold at least `min_chunk` items.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     std::size_t min_chunk = 1024);

/// Number of chunks parallel_chunks will use for n items.
std::size_t chunk_count(std::size_t n, std::size_t min_chunk = 1024);

}  // namespace cubound
