#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "optbench/optimizers.hpp"

namespace optbench {

struct MlpShape {
  std::size_t inputs = 2;
  std::size_t hidden = 16;
  std::size_t classes = 2;

  [[nodiscard]] std::size_t param_count() const noexcept {
    return hidden * inputs + hidden + classes * hidden + classes;
  }
  bool operator==(const MlpShape&) const = default;
};

/// Two-layer perceptron: scores = w2 * relu(w1 * x + b1) + b2.
/// Matrices are row-major; the flattened layout is w1, b1, w2, b2.
struct MlpModel {
  MlpShape shape;
  std::vector<double> w1;  // hidden x inputs
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // classes x hidden
  std::vector<double> b2;  // classes

  static MlpModel zeros(MlpShape shape);
  /// Uniform(-s, s) weights with s = sqrt(6 / (fan_in + fan_out)); zero biases.
  static MlpModel glorot(MlpShape shape, std::uint64_t seed);
  static MlpModel unflatten(MlpShape shape, std::span<const double> params);

  [[nodiscard]] ParamVector flatten() const;

  bool operator==(const MlpModel&) const = default;
};

struct Dataset;

ParamVector mlp_forward(const MlpModel& model, std::span<const double> input);

struct BatchLoss {
  double loss;
  ParamVector grads;  // flattened like MlpModel::flatten
};

/// Mean cross-entropy over the selected samples plus sigma * sum(theta^2),
/// with the gradient obtained by backpropagation.
BatchLoss batch_loss(const MlpModel& model, const Dataset& data,
                     std::span<const std::size_t> batch, double sigma);

/// Convenience overload over every sample of `data`.
BatchLoss batch_loss(const MlpModel& model, const Dataset& data, double sigma);

std::size_t predict(const MlpModel& model, std::span<const double> input);
double accuracy(const MlpModel& model, const Dataset& data);

}  // namespace optbench
