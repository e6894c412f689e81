#pragma once

#include <cstddef>
#include <functional>

namespace varleb {

/// Worker count: VARLEB_THREADS if set (>= 1), else hardware concurrency.
unsigned threadCount();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index must write only its own
/// output slot, so results do not depend on the thread count; the first exception thrown
/// (by lowest chunk) is rethrown.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace varleb
