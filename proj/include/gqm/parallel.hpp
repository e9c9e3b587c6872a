#pragma once

#include <cstdint>
#include <exception>
#include <functional>

namespace gqm {

// Runs body(i) for i in [0, count) on up to `threads` workers (contiguous
// static chunks; serial when threads <= 1 or count < 2). Callers write into
// preassigned slots and reduce afterwards in index order, so results never
// depend on the scheduling. If bodies throw, the exception thrown by the
// smallest index is rethrown after all workers join.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& body);

}  // namespace gqm
