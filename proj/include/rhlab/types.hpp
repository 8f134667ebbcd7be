#pragma once

#include <atomic>
#include <complex>
#include <functional>
#include <thread>
#include <vector>

namespace rhlab {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

inline double sq(double x) { return x * x; }

// Parallelism hint handed down by the driver. Modules never spawn workers on
// their own; they run independent items through parallel_for below.
struct Parallelism {
  int threads = 1;
};

// Runs fn(i) for i in [0,n). Results must be written to pre-sized slots keyed
// by i so the reduction order (and hence the output) is identical for any
// thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         const Parallelism& par = {}) {
  int nt = par.threads;
  if (nt <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (static_cast<std::size_t>(nt) > n) nt = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < nt; ++w) {
    pool.emplace_back([&fn, n, &next] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace rhlab
