#pragma once

#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace mismatch {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent stream for item `index` under a master seed; lets parallel
// replicas reproduce the serial results trial by trial.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

// std::uniform_real_distribution and std::discrete_distribution are not
// bit-stable across standard libraries; sampling is done by hand instead.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection keeps the draw unbiased for any bound.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

// Inverse-CDF draw from `cdf` (nondecreasing, back() == total mass).
inline int sample_cdf(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  int lo = 0, hi = static_cast<int>(cdf.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (cdf[static_cast<std::size_t>(mid)] > target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

unsigned worker_count();

// Splits [0, total) into fixed-size chunks and calls fn(chunk, begin, end)
// once per chunk, possibly from several threads. Chunk boundaries do not
// depend on the thread count, so per-chunk results combined in chunk order
// reproduce the serial answer bit for bit. fn must not throw.
template <class Fn>
void for_each_chunk(std::uint64_t total, std::uint64_t chunk_size, Fn&& fn) {
  if (total == 0) return;
  const std::uint64_t chunks = (total + chunk_size - 1) / chunk_size;
  const auto run = [&](std::uint64_t c) {
    const std::uint64_t begin = c * chunk_size;
    const std::uint64_t end = begin + chunk_size < total ? begin + chunk_size : total;
    fn(c, begin, end);
  };
  const std::uint64_t workers =
      std::min<std::uint64_t>(worker_count(), chunks);
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t i = 0; i < workers; ++i) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= chunks) break;
        run(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mismatch
