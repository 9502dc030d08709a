#include "optbench/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "optbench/dataset.hpp"
#include "optbench/errors.hpp"
#include "optbench/objectives.hpp"
#include "optbench/rng.hpp"

namespace optbench {
namespace {

struct Forward {
  std::vector<double> pre;     // hidden preactivations
  std::vector<double> hidden;  // relu(pre)
  std::vector<double> scores;
};

Forward forward(const MlpModel& model, std::span<const double> x) {
  const MlpShape& s = model.shape;
  if (x.size() != s.inputs) {
    throw UsageError("mlp_forward: input has " + std::to_string(x.size()) +
                     " features, model expects " + std::to_string(s.inputs));
  }
  Forward f;
  f.pre.resize(s.hidden);
  f.hidden.resize(s.hidden);
  for (std::size_t h = 0; h < s.hidden; ++h) {
    double acc = model.b1[h];
    for (std::size_t i = 0; i < s.inputs; ++i) acc += model.w1[h * s.inputs + i] * x[i];
    f.pre[h] = acc;
    f.hidden[h] = acc > 0.0 ? acc : 0.0;
  }
  f.scores.resize(s.classes);
  for (std::size_t k = 0; k < s.classes; ++k) {
    double acc = model.b2[k];
    for (std::size_t h = 0; h < s.hidden; ++h) acc += model.w2[k * s.hidden + h] * f.hidden[h];
    f.scores[k] = acc;
  }
  return f;
}

void check_shape(const MlpShape& shape) {
  if (shape.inputs == 0 || shape.hidden == 0 || shape.classes == 0) {
    throw UsageError("MLP dimensions must all be positive");
  }
}

}  // namespace

MlpModel MlpModel::zeros(MlpShape shape) {
  check_shape(shape);
  MlpModel m;
  m.shape = shape;
  m.w1.assign(shape.hidden * shape.inputs, 0.0);
  m.b1.assign(shape.hidden, 0.0);
  m.w2.assign(shape.classes * shape.hidden, 0.0);
  m.b2.assign(shape.classes, 0.0);
  return m;
}

MlpModel MlpModel::glorot(MlpShape shape, std::uint64_t seed) {
  MlpModel m = zeros(shape);
  SplitMix64 rng(seed);
  auto fill = [&rng](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& x : w) x = (2.0 * rng.uniform01() - 1.0) * limit;
  };
  fill(m.w1, shape.inputs, shape.hidden);
  fill(m.w2, shape.hidden, shape.classes);
  return m;
}

MlpModel MlpModel::unflatten(MlpShape shape, std::span<const double> params) {
  MlpModel m = zeros(shape);
  if (params.size() != shape.param_count()) {
    throw UsageError("MlpModel::unflatten: expected " + std::to_string(shape.param_count()) +
                     " parameters, got " + std::to_string(params.size()));
  }
  auto it = params.begin();
  for (auto* part : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    std::copy_n(it, part->size(), part->begin());
    it += static_cast<std::ptrdiff_t>(part->size());
  }
  return m;
}

ParamVector MlpModel::flatten() const {
  ParamVector out;
  out.reserve(shape.param_count());
  for (const auto* part : {&w1, &b1, &w2, &b2}) out.insert(out.end(), part->begin(), part->end());
  return out;
}

ParamVector mlp_forward(const MlpModel& model, std::span<const double> input) {
  return forward(model, input).scores;
}

BatchLoss batch_loss(const MlpModel& model, const Dataset& data,
                     std::span<const std::size_t> batch, double sigma) {
  if (batch.empty()) throw UsageError("batch_loss: empty batch");
  if (!(sigma >= 0.0)) throw UsageError("batch_loss: sigma must be non-negative");
  const MlpShape& s = model.shape;

  MlpModel grad = MlpModel::zeros(s);
  double data_loss = 0.0;
  std::vector<double> dhidden(s.hidden);
  for (std::size_t idx : batch) {
    if (idx >= data.size()) {
      throw UsageError("batch_loss: sample index " + std::to_string(idx) + " out of range");
    }
    const auto& x = data.inputs[idx];
    const Forward f = forward(model, x);
    const LossAndGrad ce = cross_entropy_loss(f.scores, data.labels[idx]);
    data_loss += ce.loss;

    std::fill(dhidden.begin(), dhidden.end(), 0.0);
    for (std::size_t k = 0; k < s.classes; ++k) {
      const double ds = ce.grad[k];
      grad.b2[k] += ds;
      for (std::size_t h = 0; h < s.hidden; ++h) {
        grad.w2[k * s.hidden + h] += ds * f.hidden[h];
        dhidden[h] += ds * model.w2[k * s.hidden + h];
      }
    }
    for (std::size_t h = 0; h < s.hidden; ++h) {
      if (f.pre[h] <= 0.0) continue;  // relu gate
      grad.b1[h] += dhidden[h];
      for (std::size_t i = 0; i < s.inputs; ++i) grad.w1[h * s.inputs + i] += dhidden[h] * x[i];
    }
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  ParamVector grads = grad.flatten();
  for (double& g : grads) g *= inv_n;
  double loss = data_loss * inv_n;
  if (sigma > 0.0) {
    const ParamVector params = model.flatten();
    const LossAndGrad reg = regularization_loss(params);
    loss += sigma * reg.loss;
    for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += sigma * reg.grad[i];
  }
  return {loss, std::move(grads)};
}

BatchLoss batch_loss(const MlpModel& model, const Dataset& data, double sigma) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return batch_loss(model, data, all, sigma);
}

std::size_t predict(const MlpModel& model, std::span<const double> input) {
  const ParamVector scores = mlp_forward(model, input);
  return static_cast<std::size_t>(
      std::distance(scores.begin(), std::max_element(scores.begin(), scores.end())));
}

double accuracy(const MlpModel& model, const Dataset& data) {
  if (data.empty()) throw UsageError("accuracy: empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(model, data.inputs[i]) == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace optbench
