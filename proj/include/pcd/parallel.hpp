#pragma once

#include <cstddef>
#include <functional>

namespace pcd {

// Maps requested <= 0 to std::thread::hardware_concurrency().
int resolve_threads(int requested);

// Splits [begin, end) into one contiguous chunk per worker and runs
// fn(chunk_begin, chunk_end, worker_id) on each. Worker 0 runs on the
// calling thread. The partition depends only on (begin, end, threads),
// never on scheduling, so callers that keep per-element work independent
// get identical results at any thread count.
void parallel_chunks(std::size_t begin, std::size_t end, int threads,
                     const std::function<void(std::size_t, std::size_t, int)>& fn);

// Runs fn(index, worker_id) for every index in [begin, end), dealing
// indices round-robin to workers. Intended for coarse work items.
void parallel_for(std::size_t begin, std::size_t end, int threads,
                  const std::function<void(std::size_t, int)>& fn);

}  // namespace pcd
