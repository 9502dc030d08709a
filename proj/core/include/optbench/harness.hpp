#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "optbench/dataset.hpp"
#include "optbench/mlp.hpp"
#include "optbench/objectives.hpp"
#include "optbench/optimizers.hpp"

namespace optbench {

/// One iteration of a run. `loss` is measured at the iterate *before* the
/// update of iteration t; `theta` is that same iterate for 1-D problems and
/// its l2 norm otherwise.
struct TrajectoryRecord {
  long t = 0;
  double loss = 0.0;
  double theta = 0.0;
  double grad_norm = 0.0;
  double mean_dfc = 1.0;

  bool operator==(const TrajectoryRecord&) const = default;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  OptimizerSpec spec;
  std::string objective_name;
  std::uint64_t seed = 0;

  [[nodiscard]] bool empty() const noexcept { return records.empty(); }
  [[nodiscard]] const TrajectoryRecord& back() const { return records.back(); }
};

enum class SyntheticFunction { f1, f2, f3 };

std::string_view to_string(SyntheticFunction fn) noexcept;
SyntheticFunction parse_synthetic_function(std::string_view name);
Objective make_synthetic_objective(SyntheticFunction fn);

/// Settings of the 1-D experiments: beta1 = 0.95, beta2 = 0.999, lr = 0.1,
/// theta0 = -1, 300 iterations, g0 = 0.
struct SyntheticDefaults {
  static constexpr double beta1 = 0.95;
  static constexpr double beta2 = 0.999;
  static constexpr double lr = 0.1;
  static constexpr double theta0 = -1.0;
  static constexpr long iters = 300;
};

/// `OptimizerSpec::defaults(algorithm)` with the synthetic-experiment overrides applied.
OptimizerSpec synthetic_spec(Algorithm algorithm);

/// Runs `spec` from theta0 for `iters` steps on a 1-D test function.
Trajectory run_synthetic_experiment(SyntheticFunction fn, const OptimizerSpec& spec,
                                    double theta0 = SyntheticDefaults::theta0,
                                    long iters = SyntheticDefaults::iters);

/// Generic driver: minimises `objective` from `start`, recording every iteration.
Trajectory run_objective(const Objective& objective, const OptimizerSpec& spec,
                         ParamVector start, long iters);

struct TrainingResult {
  Trajectory trajectory;  // one record per epoch
  double final_accuracy = 0.0;
  MlpModel model;
};

struct TrainingConfig {
  MlpShape shape{2, 16, 2};
  long epochs = 500;
  std::size_t batch_size = 32;
  std::uint64_t seed = 42;
  double sigma = 0.0;
};

/// Minibatch training of a freshly initialised MLP. Samples are reshuffled
/// every epoch; the model initialisation and the shuffles use separate
/// streams split from `config.seed`. Per-epoch records hold the mean batch
/// loss, the parameter norm, the mean gradient norm and the mean friction.
TrainingResult run_training_experiment(const Dataset& data, const OptimizerSpec& spec,
                                       const TrainingConfig& config);

/// Learning rate the training comparison uses for each algorithm.
OptimizerSpec training_spec(Algorithm algorithm);

/// Population standard deviation of theta over the last `window` records.
double oscillation_metric(const Trajectory& traj, std::size_t window);

}  // namespace optbench
