#pragma once

// Deterministic random streams and the chunked replicate runner.
//
// Replicates are split into fixed-size chunks; chunk k always draws from
// stream.child(k), and chunk results are merged in chunk order. The merged
// result is therefore bit-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace maxstable {

using Engine = std::mt19937_64;

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t path = 0) : seed_(seed), path_(path) {}

  std::uint64_t seed() const { return seed_; }

  // Independent sub-stream addressed by k; children of distinct k never coincide.
  RngStream child(std::uint64_t k) const;
  Engine engine() const;

 private:
  std::uint64_t seed_;
  std::uint64_t path_;
};

inline double uniform01(Engine& eng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
}

// Uniform on (0,1], safe for logarithms and negative powers.
inline double uniform_open0(Engine& eng) { return 1.0 - uniform01(eng); }

inline double standard_exponential(Engine& eng) { return -std::log(uniform_open0(eng)); }

// alpha-Pareto variable with survival function x^{-alpha}, x >= 1.
inline double pareto(Engine& eng, double alpha) { return std::pow(uniform_open0(eng), -1.0 / alpha); }

// Process-wide worker count for replicate loops; 0 means hardware concurrency.
void set_worker_count(unsigned workers);
unsigned worker_count();

inline constexpr std::size_t kChunkSize = 2048;

/// Runs `replicates` draws split into chunks. `fn(Engine&, std::size_t count, Acc&)`
/// processes one chunk into a fresh accumulator; accumulators are merged in
/// chunk order with `Acc::merge`.
template <class Acc, class Fn>
Acc run_chunked(std::size_t replicates, const RngStream& stream, const Acc& prototype, Fn&& fn) {
  const std::size_t chunks = (replicates + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> parts(chunks, prototype);
  auto do_chunk = [&](std::size_t k) {
    Engine eng = stream.child(k).engine();
    const std::size_t count = std::min(kChunkSize, replicates - k * kChunkSize);
    fn(eng, count, parts[k]);
  };

  const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(chunks, 1));
  if (workers <= 1) {
    for (std::size_t k = 0; k < chunks; ++k) do_chunk(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < chunks; k = next++) {
          try {
            do_chunk(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  Acc total = prototype;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace maxstable
