#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace edt {

/// Static block partition of [0, n) over nthreads workers. Each index is
/// processed exactly once and workers write disjoint output slots, so the
/// result is independent of the thread count.
inline void parallel_for(std::size_t n, int nthreads,
                         const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (nthreads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(nthreads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace edt
