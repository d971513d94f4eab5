#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace qhelly {

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks are
/// handed out dynamically; callers write results into per-index slots so the
/// outcome never depends on scheduling.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// Evaluates search(i) for each block i in order-preserving fashion and
/// returns the result of the smallest block index that produced one. Blocks
/// after a known hit are skipped; since blocks partition an ordered search
/// space, the answer is the same for every worker count.
template <typename Result, typename Search>
std::optional<Result> parallel_first(std::size_t count, int workers, Search&& search) {
  std::vector<std::optional<Result>> slots(count);
  std::atomic<std::size_t> best{count};
  parallel_for(count, workers, [&](std::size_t i) {
    if (i > best.load()) return;
    slots[i] = search(i);
    if (slots[i]) {
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  });
  for (auto& s : slots)
    if (s) return s;
  return std::nullopt;
}

/// splitmix64 step; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace qhelly
