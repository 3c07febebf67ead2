#pragma once

// Deterministic parallel helpers: work is split into a fixed set of tasks whose
// results are stored by index, so the reduction order never depends on how many
// worker threads ran them.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace affinekit {

/// Worker count used by the parallel helpers (default 1).
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// out[i] = f(i) for i < n, evaluated on up to thread_count() threads.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

/// Pairwise (tree) summation in index order.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace affinekit
