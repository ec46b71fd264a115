#pragma once

#include <cstddef>
#include <functional>

namespace shellconv {

/// Worker count: hardware concurrency, capped by SHELL_BENARD_THREADS when set.
[[nodiscard]] unsigned thread_cap();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots so output does not depend on scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace shellconv
