#include "core/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace commsim {

int thread_budget() {
  long parsed = 0;
  if (const char* env = std::getenv("COMMSIM_THREADS")) {
    char* end = nullptr;
    parsed = std::strtol(env, &end, 10);
    if (end == env || parsed < 0) parsed = 0;
  }
  if (parsed == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  return static_cast<int>(parsed);
}

void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  const int workers = std::min<std::int64_t>(thread_budget(), count);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] {
      for (std::int64_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace commsim
