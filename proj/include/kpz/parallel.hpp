#pragma once

#include <cstddef>
#include <functional>

namespace kpz {

// Worker count: KPZ_THREADS if set and positive, otherwise hardware concurrency.
int default_threads();
void set_default_threads(int n);

// Runs fn(i) for i in [0, n) on up to `threads` workers; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace kpz
