#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace nlab {

// Number of worker threads: NLAB_THREADS if set and positive, else
// hardware_concurrency(), else 1.
int thread_count();

// Runs fn(i) for i in [begin, end) on up to thread_count() threads.
// Work is split into contiguous blocks; fn must be safe to call
// concurrently for distinct i. Falls back to a serial loop when the
// range is small or only one thread is available.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

// Uniform double in [0, 1) from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined; this is not.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Shortest string that round-trips a double (printf %.17g).
std::string format_double(double v);

}  // namespace nlab
