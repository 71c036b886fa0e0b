#pragma once

#include <functional>

namespace conclab {

// Effective worker count: an explicit request wins, then the
// CONCURRENCE_LAB_THREADS environment variable, then the hardware count.
// Always at least 1.
int resolve_thread_count(int requested);

// Runs body(0..n_tasks-1) on up to `threads` workers. Tasks must be
// independent; the first exception thrown by any task is rethrown on the
// calling thread after all workers join.
void parallel_for(int n_tasks, int threads, const std::function<void(int)>& body);

}  // namespace conclab
