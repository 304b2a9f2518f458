#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace invmerton {

/// Worker count: TOOL_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs task(i) for i in [0, n_tasks) on up to `threads` workers (0 means
/// worker_count()). Tasks must write only to their own slots; results are
/// therefore independent of the thread count. The first exception thrown by
/// any task is rethrown after all workers join.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task, std::size_t threads = 0);

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace invmerton
