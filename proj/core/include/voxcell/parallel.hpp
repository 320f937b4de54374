#pragma once

#include <cstddef>
#include <functional>

namespace voxcell {

/// Number of worker threads used by parallel loops. Defaults to the
/// VOXCELL_THREADS environment variable, else the hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Splits [0, n) into contiguous chunks, one per thread, and calls
/// fn(begin, end, chunk_index). Chunk boundaries depend only on n and the
/// thread count, so fixed-order merges of per-chunk results are reproducible.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t, int)>& fn);

/// Number of chunks parallel_for will use for a range of size n.
int chunk_count(std::size_t n);

}  // namespace voxcell
