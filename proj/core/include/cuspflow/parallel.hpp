#pragma once

#include <cstddef>
#include <functional>

namespace cuspflow::parallel {

/// Worker count: CUSPFLOW_WORKERS env var if set, else `requested` if > 0,
/// else hardware concurrency.
int resolve_workers(int requested);

/// Runs fn(0..count-1) on up to `workers` threads.  Work is split into
/// contiguous index blocks; callers own determinism by indexed output slots.
void for_each_index(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace cuspflow::parallel
