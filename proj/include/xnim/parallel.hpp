#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "xnim/ranking.hpp"

namespace xnim {

// Splits [0, count) into `threads` contiguous chunks and runs
// f(begin, end, worker) on each. Chunk boundaries depend only on
// (count, threads), and the first exception thrown by a worker is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2 * threads) {
    f(std::size_t{0}, count, 0u);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, begin, end, w] {
      try {
        f(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Runs f(rank, position, worker) over every position of `index`, splitting
// leader values into contiguous chunks of similar size.
template <class Index, class F>
void parallel_for_each_ranked(const Index& index, unsigned threads, F&& f) {
  threads = std::max(1u, threads);
  const auto bound = index.bound();
  std::vector<decltype(index.bound())> cuts{0};
  const auto per = index.total() / threads + 1;
  for (unsigned w = 1; w < threads; ++w) {
    auto v = cuts.back();
    while (v <= bound && index.binom(v + index.n() - 1, index.n()) < per * w) ++v;
    cuts.push_back(v);
  }
  cuts.push_back(bound + 1);
  parallel_for(threads, threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t w = begin; w < end; ++w) {
      if (cuts[w] >= cuts[w + 1]) continue;
      for_each_ranked(index, cuts[w], cuts[w + 1] - 1,
                      [&](std::uint64_t r, const auto& x) { f(r, x, static_cast<unsigned>(w)); });
    }
  });
}

}  // namespace xnim
