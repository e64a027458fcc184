#pragma once

#include <cstddef>
#include <functional>

namespace rlsw {

/// Worker count used when callers pass 0. Defaults to RLSW_WORKERS or the
/// hardware concurrency.
std::size_t default_workers();
void set_default_workers(std::size_t n);

/// Calls fn(i) for i in [0, n). Each index must write disjoint output so the
/// result does not depend on the worker count. The first exception thrown by
/// any task is rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t workers = 0);

}  // namespace rlsw
