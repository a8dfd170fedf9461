#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace bilform {

inline uint32_t resolve_jobs(uint32_t jobs) {
  if (jobs == 0) {
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
  }
  return jobs;
}

// Splits [0, n) into contiguous shards and runs fn(shard, lo, hi) on each,
// one thread per shard. Exceptions propagate from shard 0 only; worker
// shards are expected not to throw (they record findings instead).
inline void run_sharded(uint64_t n, uint32_t jobs,
                        const std::function<void(uint32_t, uint64_t, uint64_t)>& fn) {
  jobs = resolve_jobs(jobs);
  uint64_t nshards = std::min<uint64_t>(jobs, n ? n : 1);
  if (nshards <= 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> threads;
  for (uint64_t s = 0; s < nshards; ++s) {
    uint64_t lo = n * s / nshards;
    uint64_t hi = n * (s + 1) / nshards;
    threads.emplace_back([&fn, s, lo, hi] { fn(static_cast<uint32_t>(s), lo, hi); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace bilform
