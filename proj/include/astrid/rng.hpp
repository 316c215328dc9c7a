#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace astrid {

// SplitMix64 finalizer. Good avalanche, cheap, stable across platforms.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives the seed of an independent substream from a master seed and a tag
// path. Used as a counter-based splitter: every (replicate, group, class, ...)
// coordinate gets its own stream, so results do not depend on the order in
// which streams are consumed or on how work is scheduled across threads.
template <class... Tags>
std::uint64_t derive_seed(std::uint64_t seed, Tags... tags) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dull);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(tags) + 0x9e3779b97f4a7c15ull))), ...);
  return h;
}

// Deterministic generator wrapping std::mt19937_64 (whose output sequence is
// fixed by the standard). The derived draws below avoid std::*_distribution,
// whose algorithms are implementation-defined and would break bit-for-bit
// reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw from {0, ..., n-1} by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (rem == 0 || x < 0 - rem) return x % n;
    }
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller. u1 is kept in (0, 1] so the log is finite.
  double normal() {
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace astrid
