#pragma once

// Deterministic random streams. SplitMix64 with explicit bit-to-double
// conversion, so identical seeds give identical samples on every platform.

#include <cstdint>

namespace isolink {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Independent substream keyed by coordinates (batch, cell, ...).
inline SplitMix64 keyed_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                               std::uint64_t c = 0) {
  SplitMix64 g(seed);
  std::uint64_t h = g.next();
  h ^= (a + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2));
  SplitMix64 g2(h);
  h = g2.next() ^ (b * 0xD6E8FEB86659FD93ull + 0x2545F4914F6CDD1Dull);
  SplitMix64 g3(h);
  h = g3.next() ^ (c * 0xA24BAED4963EE407ull + 1);
  return SplitMix64(h);
}

}  // namespace isolink
