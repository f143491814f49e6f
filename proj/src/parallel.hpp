#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace walshreg::detail {

// Calls fn(i) for every i in [begin, end), split into contiguous chunks over
// `workers` threads. Each index is visited exactly once, so outputs written per
// index do not depend on the worker count.
template <class Fn>
void parallel_for(int begin, int end, int workers, Fn&& fn) {
  const int count = end - begin;
  if (count <= 0) return;
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + static_cast<int>(static_cast<long long>(count) * w / workers);
    const int hi = begin + static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
    threads.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
}

}  // namespace walshreg::detail
