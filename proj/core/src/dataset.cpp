#include "optbench/dataset.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "optbench/errors.hpp"
#include "optbench/rng.hpp"

namespace optbench {

void Dataset::validate() const {
  if (inputs.size() != labels.size()) {
    throw UsageError("dataset has " + std::to_string(inputs.size()) + " inputs but " +
                     std::to_string(labels.size()) + " labels");
  }
  for (std::size_t label : labels) {
    if (label >= num_classes) {
      throw UsageError("dataset label " + std::to_string(label) + " out of range");
    }
  }
}

Dataset generate_two_moons(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) {
    throw UsageError("generate_two_moons: n must be even and >= 2, got " + std::to_string(n));
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw UsageError("generate_two_moons: noise must be a finite non-negative number");
  }
  const std::size_t half = n / 2;
  const double denom = half > 1 ? static_cast<double>(half - 1) : 1.0;

  Dataset data;
  data.num_classes = 2;
  data.seed = seed;
  data.inputs.reserve(n);
  data.labels.reserve(n);
  for (std::size_t cls = 0; cls < 2; ++cls) {
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = std::numbers::pi * static_cast<double>(k) / denom;
      if (cls == 0) {
        data.inputs.push_back({std::cos(angle), std::sin(angle)});
      } else {
        data.inputs.push_back({1.0 - std::cos(angle), 0.5 - std::sin(angle)});
      }
      data.labels.push_back(cls);
    }
  }
  if (noise > 0.0) {
    SplitMix64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise);
    for (auto& point : data.inputs) {
      for (double& coord : point) coord += gauss(rng);
    }
  }
  return data;
}

}  // namespace optbench
