#pragma once

#include <cstdint>
#include <functional>

namespace ccwb {

// Worker count: CCWB_WORKERS environment override, otherwise hardware
// concurrency, always at least 1.
int worker_count();

// Runs task(t) for t in [0, num_tasks).  Tasks are striped across workers
// (worker w takes t == w mod W), so every task sees the same index regardless
// of the worker count; callers must write results into per-task slots (or
// fold per-worker partials in a fixed order) to stay byte-deterministic.
void run_tasks(int64_t num_tasks, const std::function<void(int64_t)>& task);

}  // namespace ccwb
