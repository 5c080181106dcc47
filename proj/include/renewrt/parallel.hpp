#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "renewrt/rng.hpp"

namespace renewrt {

/// Rays per independent random stream. Fixed so that results do not depend on
/// how many workers share the chunks.
inline constexpr std::uint64_t kChunkSize = 1u << 14;

inline std::uint64_t chunk_count(std::uint64_t n) { return (n + kChunkSize - 1) / kChunkSize; }

/// Runs `body(chunk_index, first, last, rng)` for every chunk of [0, n) on up
/// to `workers` threads. Chunk k always gets stream (seed, k), and each chunk
/// writes its own Partial, so the returned vector is scheduling independent.
/// The caller merges partials in index order.
template <typename Partial, typename Body>
std::vector<Partial> run_chunked(std::uint64_t n, std::uint64_t seed, unsigned workers,
                                 Body&& body) {
  const std::uint64_t chunks = chunk_count(n);
  std::vector<Partial> partials(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= chunks) return;
      try {
        CounterRng rng(seed, k);
        const std::uint64_t first = k * kChunkSize;
        const std::uint64_t last = std::min(n, first + kChunkSize);
        partials[k] = body(k, first, last, rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return partials;
}

}  // namespace renewrt
