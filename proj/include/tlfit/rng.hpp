#pragma once

#include <cstdint>

namespace tlfit {

/// SplitMix64 output finalizer (Stafford "Mix13"). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Derives an independent child seed for `stream` from `seed`:
///   split(s, k) = mix64(s XOR mix64(k + 0x9e3779b97f4a7c15))
constexpr std::uint64_t split(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + kGoldenGamma));
}

/// split(s, a, b) = split(split(s, a), b)
constexpr std::uint64_t split(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return split(split(seed, a), b);
}

/// Counter-based generator: the i-th word of a stream is
///   mix64(key + (i + 1) * 0x9e3779b97f4a7c15)
/// which is exactly the SplitMix64 sequence started from state `key`.
/// Random access, no mutable state.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t key() const noexcept { return key_; }

  constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
    return mix64(key_ + (index + 1) * kGoldenGamma);
  }

  /// Uniform on the open interval (0, 1): ((bits >> 12) + 0.5) * 2^-52.
  /// Smallest value 2^-53, largest 1 - 2^-53; never 0 or 1.
  constexpr double uniform(std::uint64_t index) const noexcept {
    return (static_cast<double>(bits(index) >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform on (lo, hi).
  constexpr double uniform(std::uint64_t index, double lo, double hi) const noexcept {
    return lo + (hi - lo) * uniform(index);
  }

 private:
  std::uint64_t key_;
};

}  // namespace tlfit
