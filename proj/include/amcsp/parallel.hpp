#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace amcsp {

// Runs fn(shard) for shard in [0, shards) on up to hardware_concurrency
// threads. Callers write into per-shard slots and merge by index, so the
// result never depends on scheduling. The first exception is rethrown.
template <class Fn>
void for_each_shard(std::size_t shards, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(shards, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t s = 0; s < shards; ++s) fn(s);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t s = w; s < shards; s += workers) fn(s);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace amcsp
