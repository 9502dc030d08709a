#pragma once

#include <cstdint>
#include <limits>

namespace optbench {

/// SplitMix64 generator: 64-bit state, one add and a finalizing mix per draw.
/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
/// `split(stream)` derives an independent generator for a named sub-stream,
/// which lets every experiment own its own reproducible sequence.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  [[nodiscard]] constexpr SplitMix64 split(std::uint64_t stream) const noexcept {
    return SplitMix64(mix(state_ ^ mix(stream + 0xD1B54A32D192ED03ULL)));
  }

  [[nodiscard]] constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace optbench
