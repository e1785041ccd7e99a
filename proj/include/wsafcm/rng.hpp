#pragma once

#include <cstdint>
#include <random>

namespace wsafcm {

/// Deterministic random source. All randomness in the simulator flows
/// through this wrapper so traces are bit-reproducible for a given seed:
/// the engine is std::mt19937_64 (fully specified by the standard) and
/// the uniform mapping below avoids the implementation-defined behaviour
/// of std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  /// SplitMix64 sub-stream derivation: independent seeds for the
  /// deployment and protocol streams of one run.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed;
    std::uint64_t z = 0;
    for (std::uint64_t i = 0; i <= stream; ++i) {
      x += 0x9E3779B97F4A7C15ULL;
      z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      z = z ^ (z >> 31);
    }
    return z;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wsafcm
