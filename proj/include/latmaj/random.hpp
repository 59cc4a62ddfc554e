#pragma once

#include <cstdint>

namespace latmaj {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: the k-th draw of stream (seed, id) is a pure function
/// of (seed, id, k), so streams can be consumed in any order or in parallel.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t id) noexcept
      : key_(mix64(seed ^ mix64(id ^ 0xD1B54A32D192ED03ULL))) {}

  constexpr std::uint64_t next() noexcept {
    return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
  }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t x = next();
    while (x < threshold) x = next();
    return x % bound;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seed for the r-th derived sub-run of a parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) + index);
}

}  // namespace latmaj
