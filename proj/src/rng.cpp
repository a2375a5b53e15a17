#include "maxstable/rng.hpp"

#include <array>

namespace maxstable {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::atomic<unsigned> g_workers{0};

}  // namespace

RngStream RngStream::child(std::uint64_t k) const {
  return RngStream(seed_, splitmix64(path_ ^ splitmix64(k + 0x632BE59BD9B4E019ull)));
}

Engine RngStream::engine() const {
  const std::uint64_t a = splitmix64(seed_);
  const std::uint64_t b = splitmix64(path_ + 0x5851F42D4C957F2Dull);
  std::array<std::uint32_t, 4> words{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                                     static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

void set_worker_count(unsigned workers) { g_workers = workers; }

unsigned worker_count() {
  const unsigned w = g_workers;
  if (w != 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace maxstable
