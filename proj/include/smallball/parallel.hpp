#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace smallball {

/// Worker count from SMALLBALL_WORKERS, else 1.
inline unsigned default_workers() {
  if (const char* env = std::getenv("SMALLBALL_WORKERS")) {
    try {
      long v = std::stol(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

/// Splits [0, total) into fixed-size chunks and runs fn(chunk_index, begin,
/// end) for each. Chunk boundaries depend only on `chunk`, never on the worker
/// count, so per-chunk results reduced in chunk order are reproducible.
template <class Fn>
void for_each_chunk(std::uint64_t total, std::uint64_t chunk, unsigned workers, Fn&& fn) {
  if (chunk == 0) chunk = 1;
  if (workers == 0) workers = 1;
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  auto run = [&](unsigned w) {
    for (std::uint64_t c = w; c < chunks; c += workers) {
      std::uint64_t begin = c * chunk;
      std::uint64_t end = std::min(total, begin + chunk);
      fn(c, begin, end);
    }
  };
  if (workers <= 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) fn(c, c * chunk, std::min(total, (c + 1) * chunk));
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  for (auto& t : pool) t.join();
}

inline std::uint64_t chunk_count(std::uint64_t total, std::uint64_t chunk) { return (total + chunk - 1) / chunk; }

}  // namespace smallball
