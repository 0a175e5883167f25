#pragma once

#include <cstddef>
#include <functional>

namespace mgrit {

// Worker count: hardware concurrency, capped by MGRIT_ORACLE_THREADS when set.
int worker_count();

// Calls fn(i) for i in [0, n) on up to worker_count() threads. The first
// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace mgrit
