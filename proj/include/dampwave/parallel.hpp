#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dampwave {

/// Worker count: DAMPWAVE_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs fn(0..count-1) on up to worker_count() threads. Results come back
/// in index order regardless of scheduling; the first exception thrown by
/// any task is rethrown after all tasks finish.
template <class R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& fn);

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

template <class R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& fn) {
    std::vector<R> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace dampwave
