#pragma once

#include <cstddef>
#include <functional>

namespace convexlab {

/// Worker count: min(hardware_concurrency, CONVEXLAB_THREADS when set), >= 1.
std::size_t thread_budget();

/// Run fn(i) for i in [0, n). Work items must be independent; each writes only
/// to its own slot, so results do not depend on the execution schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace convexlab
