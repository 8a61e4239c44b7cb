#include "sforge/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sforge {

int max_threads() {
  static const int cached = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("SOLITON_FORGE_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
  }();
  return cached;
}

void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), std::max<std::size_t>(n, 1));
  if (n == 0) return;
  if (nthreads <= 1 || n < 2 * nthreads) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sforge
