#pragma once

#include <cstddef>
#include <functional>

namespace goliath {

/// Worker cap: GOLIATH_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) over up to worker_count() threads.
/// Each index must write only to its own output slot. The first exception
/// thrown by any worker is rethrown on the calling thread. Calls made from
/// inside a body run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace goliath
