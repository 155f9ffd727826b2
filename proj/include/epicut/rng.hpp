#pragma once

#include <cstdint>

namespace epicut {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937_64 because
/// the stream and the derived real/integer draws are pinned here, so instance
/// fingerprints reproduce across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] via 128-bit multiply-shift.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto wide = static_cast<unsigned __int128>(next()) * range;
    return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
  }

 private:
  std::uint64_t state_;
};

}  // namespace epicut
