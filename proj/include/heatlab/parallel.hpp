#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace heatlab {

// Global thread count, set once by the CLI (--threads). Default 1.
int& thread_count();

// Deterministic parallel loop: body(i) must write only to slot i of some
// pre-sized output; reductions over the outputs are then done by the caller
// in index order, so single- and multi-threaded runs agree bit-for-bit.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& body) {
  int nt = thread_count();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += nthreads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace heatlab
