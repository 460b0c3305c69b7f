#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qcafqmc {

// Worker-thread cap: QMCF_THREADS env var, else hardware concurrency.
inline int max_threads() {
  if (const char* env = std::getenv("QMCF_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Chunked parallel loop over [0, n). Results must be written to disjoint,
// index-owned slots so the outcome is independent of the thread count; any
// reduction happens afterwards in index order.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  int nt = max_threads();
  if (nt <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qcafqmc
