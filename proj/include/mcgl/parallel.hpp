#pragma once

#include <cstddef>
#include <functional>

namespace mcgl {

/// Worker count: min(MCGL_THREADS if set, hardware concurrency), at least 1.
unsigned worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. fn must be
/// safe to call concurrently for distinct i; results should be written to
/// pre-sized storage indexed by i so output stays deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mcgl
