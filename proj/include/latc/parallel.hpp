#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace latc {

/// Worker count: LATC_WORKERS if set, otherwise hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("LATC_WORKERS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `work(chunk)` for chunk in [0, n_chunks) on up to `workers` threads
/// and returns the per-chunk results in chunk order. The partition is fixed
/// by the caller, so the result never depends on the worker count.
template <class Result, class Work>
std::vector<Result> parallel_chunks(std::size_t n_chunks, unsigned workers, Work&& work) {
  std::vector<Result> results(n_chunks);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n_chunks, 1))));
  if (workers == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) results[c] = work(c);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < n_chunks && !failed; c = next++) {
        try {
          results[c] = work(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          failed = true;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Merges accumulators pairwise in index order.
template <class Acc>
Acc tree_merge(std::vector<Acc> parts) {
  if (parts.empty()) return Acc{};
  while (parts.size() > 1) {
    std::vector<Acc> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      Acc a = parts[i];
      a.merge(parts[i + 1]);
      next.push_back(a);
    }
    if (parts.size() % 2) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

}  // namespace latc
