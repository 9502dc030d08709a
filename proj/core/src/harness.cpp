#include "optbench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "optbench/errors.hpp"
#include "optbench/rng.hpp"

namespace optbench {
namespace {

double l2_norm(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return std::sqrt(sum);
}

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

}  // namespace

std::string_view to_string(SyntheticFunction fn) noexcept {
  switch (fn) {
    case SyntheticFunction::f1: return "f1";
    case SyntheticFunction::f2: return "f2";
    case SyntheticFunction::f3: return "f3";
  }
  return "?";
}

SyntheticFunction parse_synthetic_function(std::string_view name) {
  if (name == "f1") return SyntheticFunction::f1;
  if (name == "f2") return SyntheticFunction::f2;
  if (name == "f3") return SyntheticFunction::f3;
  throw UsageError("unknown function '" + std::string(name) + "'");
}

Objective make_synthetic_objective(SyntheticFunction fn) {
  switch (fn) {
    case SyntheticFunction::f1: return make_f1_objective();
    case SyntheticFunction::f2: return make_f2_objective();
    case SyntheticFunction::f3: return make_f3_objective();
  }
  throw UsageError("unknown synthetic function");
}

OptimizerSpec synthetic_spec(Algorithm algorithm) {
  OptimizerSpec spec = OptimizerSpec::defaults(algorithm);
  spec.beta1 = SyntheticDefaults::beta1;
  spec.beta2 = SyntheticDefaults::beta2;
  spec.lr = SyntheticDefaults::lr;
  return spec;
}

Trajectory run_objective(const Objective& objective, const OptimizerSpec& spec,
                         ParamVector start, long iters) {
  if (iters < 1) throw UsageError("iteration count must be >= 1, got " + std::to_string(iters));
  if (start.size() != objective.dim()) {
    throw UsageError("start point has " + std::to_string(start.size()) + " coordinates, '" +
                     objective.name() + "' expects " + std::to_string(objective.dim()));
  }
  Optimizer opt(spec, start.size());
  Trajectory traj;
  traj.spec = spec;
  traj.objective_name = objective.name();
  traj.records.reserve(static_cast<std::size_t>(iters));

  ParamVector theta = std::move(start);
  for (long t = 1; t <= iters; ++t) {
    const Evaluation e = objective.eval(theta);
    TrajectoryRecord rec;
    rec.t = t;
    rec.loss = e.loss;
    rec.theta = theta.size() == 1 ? theta[0] : l2_norm(theta);
    rec.grad_norm = l2_norm(e.grad);
    rec.mean_dfc = opt.step_in_place(theta, e.grad).mean_dfc;
    traj.records.push_back(rec);
  }
  return traj;
}

Trajectory run_synthetic_experiment(SyntheticFunction fn, const OptimizerSpec& spec,
                                    double theta0, long iters) {
  return run_objective(make_synthetic_objective(fn), spec, ParamVector{theta0}, iters);
}

OptimizerSpec training_spec(Algorithm algorithm) {
  OptimizerSpec spec = OptimizerSpec::defaults(algorithm);
  switch (algorithm) {
    case Algorithm::sgd:
    case Algorithm::adagrad:
      spec.lr = 0.1;
      break;
    case Algorithm::sgdm:
      spec.lr = 0.01;
      break;
    case Algorithm::adadelta:
      break;
    case Algorithm::rmsprop:
    case Algorithm::adam:
    case Algorithm::amsgrad:
    case Algorithm::diffgrad:
      spec.lr = 0.01;
      break;
  }
  return spec;
}

TrainingResult run_training_experiment(const Dataset& data, const OptimizerSpec& spec,
                                       const TrainingConfig& config) {
  if (data.empty()) throw UsageError("run_training_experiment: empty dataset");
  data.validate();
  if (config.batch_size == 0 || config.batch_size > data.size()) {
    throw UsageError("batch size must lie in [1, " + std::to_string(data.size()) + "], got " +
                     std::to_string(config.batch_size));
  }
  if (config.epochs < 0) throw UsageError("epoch count must be non-negative");
  if (config.shape.classes != data.num_classes) {
    throw UsageError("model has " + std::to_string(config.shape.classes) +
                     " classes but the dataset has " + std::to_string(data.num_classes));
  }

  const SplitMix64 root(config.seed);
  MlpModel model = MlpModel::glorot(config.shape, root.split(kInitStream)());
  SplitMix64 shuffle_rng = root.split(kShuffleStream);

  ParamVector params = model.flatten();
  Optimizer opt(spec, params.size());
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainingResult result;
  result.trajectory.spec = spec;
  result.trajectory.objective_name = "mlp";
  result.trajectory.seed = config.seed;

  for (long epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    double grad_norm_sum = 0.0;
    double dfc_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(start + config.batch_size, order.size());
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      const BatchLoss bl = batch_loss(model, data, batch, config.sigma);
      const StepReport rep = opt.step_in_place(params, bl.grads);
      model = MlpModel::unflatten(config.shape, params);
      loss_sum += bl.loss;
      grad_norm_sum += l2_norm(bl.grads);
      dfc_sum += rep.mean_dfc;
      ++batches;
    }
    const auto nb = static_cast<double>(batches);
    result.trajectory.records.push_back(
        {epoch, loss_sum / nb, l2_norm(params), grad_norm_sum / nb, dfc_sum / nb});
  }
  result.final_accuracy = accuracy(model, data);
  result.model = std::move(model);
  return result;
}

double oscillation_metric(const Trajectory& traj, std::size_t window) {
  if (window == 0) throw UsageError("oscillation_metric: window must be >= 1");
  if (window > traj.records.size()) {
    throw UsageError("oscillation_metric: window " + std::to_string(window) +
                     " exceeds trajectory length " + std::to_string(traj.records.size()));
  }
  const auto first = traj.records.end() - static_cast<std::ptrdiff_t>(window);
  double mean = 0.0;
  for (auto it = first; it != traj.records.end(); ++it) mean += it->theta;
  mean /= static_cast<double>(window);
  double sq = 0.0;
  for (auto it = first; it != traj.records.end(); ++it) sq += (it->theta - mean) * (it->theta - mean);
  return std::sqrt(sq / static_cast<double>(window));
}

}  // namespace optbench
