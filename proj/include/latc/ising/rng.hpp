#pragma once

#include <cstdint>

namespace latc::ising {

/// Counter-based generator: the value for a given (key, counter) pair is a
/// pure function, so every site/sweep draws the same number no matter how
/// the work is partitioned.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix(mix(key_ + counter * 0x9E3779B97F4A7C15ULL) ^ counter);
  }

  /// Uniform in [0, 1).
  constexpr double uniform(std::uint64_t counter) const { return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace latc::ising
