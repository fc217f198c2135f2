#pragma once
// Tiny persistent thread pool with a static-partition parallel_for.
//
// Determinism contract: callers only ever parallelize loops whose iterations
// write disjoint outputs and reduce sequentially per-iteration, so results are
// bitwise independent of the thread count.

#include <cstdint>
#include <functional>

namespace tfd {

// Worker count: TFD_THREADS env override, else hardware_concurrency().
int thread_count();

// Splits [0, n) into contiguous chunks and runs fn(begin, end) on each.
// Runs inline when n is small or when called from inside a pool worker.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn);

// Convenience per-index form.
template <typename F>
void parallel_for_each(int64_t n, F&& f) {
  parallel_for(n, [&](int64_t b, int64_t e) {
    for (int64_t i = b; i < e; ++i) f(i);
  });
}

}  // namespace tfd
