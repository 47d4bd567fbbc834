#pragma once

#include <cstddef>
#include <functional>

namespace fatou {

/// Worker count for parallel loops: FATOU_LAB_THREADS if set (>= 1), else the hardware default.
/// Every parallel loop writes disjoint outputs in a fixed per-element order, so results do not
/// depend on this value.
int thread_count();

/// Runs body(i) for i in [0, n) across threads; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace fatou
