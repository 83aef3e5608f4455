#pragma once

#include <cstddef>
#include <functional>

namespace fpp {

// Worker count used when a caller passes jobs <= 0: FPP_JOBS if set, else the hardware count.
int default_jobs();

// Calls body(i) for every i in [0, count) on up to `jobs` threads. Callers write into
// per-index slots and fold afterwards in index order, so results never depend on scheduling.
// The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace fpp
