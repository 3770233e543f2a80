#pragma once

#include <cstddef>
#include <functional>

namespace sbvp {

// Worker count: hardware concurrency, capped by SPECTRAL_BVP_THREADS when set.
int worker_count();

// Runs body(i) for i in [0, n); rethrows the first exception raised by any worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sbvp
