#pragma once

#include <cstddef>
#include <functional>

namespace xwigner {

// Worker count: min(XWIGNER_THREADS, hardware_concurrency), at least 1.
unsigned worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker, so results are bitwise independent of the thread count as long as
// distinct i write distinct outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace xwigner
