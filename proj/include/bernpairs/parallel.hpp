#pragma once

#include <cstddef>
#include <functional>

namespace bernpairs {

/// Hardware concurrency, at least 1.
unsigned default_jobs() noexcept;

/// Runs f(i) for every i in [0, count) on up to `jobs` threads. Indices are
/// handed out from the top when `descending` is set (useful when cost grows
/// with i). The first exception thrown by any task is rethrown after all
/// threads have joined.
void parallel_for(std::size_t count, unsigned jobs, bool descending,
                  const std::function<void(std::size_t)>& f);

}  // namespace bernpairs
