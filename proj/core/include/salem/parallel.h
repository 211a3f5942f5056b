#ifndef SALEM_PARALLEL_H_
#define SALEM_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace salem {

// Worker count used by ParallelFor. Defaults to the hardware concurrency.
void SetThreadCount(int n);
int ThreadCount();

// Splits [begin, end) into contiguous chunks, one per worker, and runs
// fn(chunk_begin, chunk_end) on each. Chunk boundaries depend only on the
// range and the worker count; callers write disjoint outputs so results do
// not depend on scheduling.
void ParallelFor(std::size_t begin, std::size_t end,
                 const std::function<void(std::size_t, std::size_t)>& fn,
                 std::size_t min_chunk = 1024);

}  // namespace salem

#endif  // SALEM_PARALLEL_H_
