#include "gqm/parallel.hpp"

#include <algorithm>
#include <mutex>
#include <thread>
#include <vector>

namespace gqm {

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  const int workers = std::min<std::int64_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }

  // Contiguous static chunks; the exception raised at the smallest index
  // wins, so failures are as deterministic as the work itself.
  std::mutex mutex;
  std::exception_ptr first_error;
  std::int64_t first_error_index = -1;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t end = std::min(begin + chunk, count);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::int64_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mutex);
          if (first_error_index < 0 || i < first_error_index) {
            first_error = std::current_exception();
            first_error_index = i;
          }
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gqm
