#pragma once

#include <cstddef>
#include <functional>

namespace ssrqec {

/// Number of worker threads to use. Reads SSRQEC_THREADS on every call;
/// falls back to std::thread::hardware_concurrency().
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads with a
/// static contiguous partition. Each index is visited exactly once, so a
/// body that only writes slot i produces results independent of the
/// worker count. The first exception thrown by any worker is rethrown.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ssrqec
