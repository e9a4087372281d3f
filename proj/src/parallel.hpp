#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace edgepose {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. If any call throws,
// the exception of the lowest failing index is rethrown after all threads
// have joined.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn &&fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
    }
    for (auto &t : threads) t.join();
  }
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace edgepose
