#pragma once

// Counter-based random numbers: the value at (seed, stream, counter) is a pure
// function, so any partition of the counter range across threads reproduces the
// same draws.

#include <cstdint>

namespace affinekit {

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

/// Sequential view of one substream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t start = 0)
      : rng_(seed, stream), counter_(start) {}
  std::uint64_t next_bits() { return rng_.bits(counter_++); }
  double uniform() { return rng_.uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one value per two draws).
  double normal();

 private:
  CounterRng rng_;
  std::uint64_t counter_;
};

}  // namespace affinekit
