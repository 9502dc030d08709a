#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace optbench {

struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] bool empty() const noexcept { return labels.empty(); }

  /// Throws UsageError if inputs/labels disagree in length or a label is out of range.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

/// Two interleaved half circles, n/2 points per class, labels 0 then 1.
/// Class 0 lies on (cos(pi s), sin(pi s)); class 1 on (1 - cos(pi s), 0.5 - sin(pi s)),
/// with s evenly spaced in [0, 1]. Gaussian noise of std `noise` is added to
/// each coordinate from a generator seeded by `seed`.
Dataset generate_two_moons(std::size_t n, double noise, std::uint64_t seed);

}  // namespace optbench
