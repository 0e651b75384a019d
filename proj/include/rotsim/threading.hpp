#pragma once

#include <cstddef>
#include <functional>

namespace rotsim {

/// Worker count: ROTSIM_THREADS if set (clamped to >= 1), otherwise the
/// hardware concurrency.
unsigned thread_count();

/// Runs fn(begin, end) over a static partition of [0, n). Deterministic as
/// long as the ranges write disjoint outputs.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace rotsim
