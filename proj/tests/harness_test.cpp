#include <gtest/gtest.h>

#include <cmath>

#include "optbench/errors.hpp"
#include "optbench/harness.hpp"
#include "optbench/rng.hpp"

namespace optbench {
namespace {

TEST(Synthetic, DiffgradEscapesToGlobalMinimumOnF1) {
  const auto traj = run_synthetic_experiment(SyntheticFunction::f1, synthetic_spec(Algorithm::diffgrad));
  ASSERT_EQ(traj.records.size(), 300u);
  EXPECT_LT(traj.back().loss, 1e-3);
  EXPECT_LT(std::fabs(traj.back().theta + 0.3), 0.05);
  EXPECT_EQ(traj.objective_name, "f1");
}

TEST(Synthetic, AdamSettlesInLocalMinimumOnF1) {
  const auto traj = run_synthetic_experiment(SyntheticFunction::f1, synthetic_spec(Algorithm::adam));
  EXPECT_LT(std::fabs(traj.back().theta - 0.2), 0.05);
  EXPECT_NEAR(traj.back().loss, 0.05, 0.01);
}

TEST(Synthetic, RecordsStartAtOneAndCarryLossAtIterate) {
  const auto traj =
      run_synthetic_experiment(SyntheticFunction::f1, synthetic_spec(Algorithm::adam), -1.0, 1);
  ASSERT_EQ(traj.records.size(), 1u);
  EXPECT_EQ(traj.records[0].t, 1);
  EXPECT_NEAR(traj.records[0].loss, 0.49, 1e-15);
  EXPECT_EQ(traj.records[0].theta, -1.0);
  EXPECT_NEAR(traj.records[0].grad_norm, 1.4, 1e-15);
  EXPECT_THROW(
      run_synthetic_experiment(SyntheticFunction::f1, synthetic_spec(Algorithm::adam), -1.0, 0),
      UsageError);
}

TEST(Synthetic, TimeIndexStrictlyIncreasing) {
  const auto traj =
      run_synthetic_experiment(SyntheticFunction::f3, synthetic_spec(Algorithm::sgdm), -1.0, 40);
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    EXPECT_EQ(traj.records[k].t, static_cast<long>(k + 1));
  }
}

TEST(Synthetic, DefaultsMirrorExperimentSettings) {
  const auto spec = synthetic_spec(Algorithm::diffgrad);
  EXPECT_EQ(spec.beta1, 0.95);
  EXPECT_EQ(spec.beta2, 0.999);
  EXPECT_EQ(spec.lr, 0.1);
  EXPECT_EQ(SyntheticDefaults::theta0, -1.0);
  EXPECT_EQ(SyntheticDefaults::iters, 300);
  EXPECT_THROW(parse_synthetic_function("f9"), UsageError);
}

TEST(Training, ZeroEpochsReportsUntrainedAccuracy) {
  const auto data = generate_two_moons(40, 0.2, 1);
  TrainingConfig cfg;
  cfg.epochs = 0;
  cfg.batch_size = 8;
  const auto r = run_training_experiment(data, training_spec(Algorithm::adam), cfg);
  EXPECT_TRUE(r.trajectory.empty());
  const auto untrained = MlpModel::glorot(cfg.shape, SplitMix64(cfg.seed).split(1)());
  EXPECT_EQ(r.model, untrained);
  EXPECT_DOUBLE_EQ(r.final_accuracy, accuracy(untrained, data));
}

TEST(Training, Deterministic) {
  const auto data = generate_two_moons(60, 0.2, 2);
  TrainingConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 16;
  const auto a = run_training_experiment(data, training_spec(Algorithm::diffgrad), cfg);
  const auto b = run_training_experiment(data, training_spec(Algorithm::diffgrad), cfg);
  EXPECT_EQ(a.trajectory.records, b.trajectory.records);
  EXPECT_EQ(a.model, b.model);
  ASSERT_EQ(a.trajectory.records.size(), 20u);
  EXPECT_LT(a.trajectory.back().loss, a.trajectory.records.front().loss);
}

TEST(Training, RejectsBadInputs) {
  const auto data = generate_two_moons(10, 0.2, 2);
  TrainingConfig cfg;
  cfg.batch_size = 11;
  EXPECT_THROW(run_training_experiment(data, training_spec(Algorithm::sgd), cfg), UsageError);
  cfg.batch_size = 0;
  EXPECT_THROW(run_training_experiment(data, training_spec(Algorithm::sgd), cfg), UsageError);
  EXPECT_THROW(run_training_experiment(Dataset{}, training_spec(Algorithm::sgd), TrainingConfig{}),
               UsageError);
}

TEST(Training, DiffgradLearnsTwoMoons) {
  const auto data = generate_two_moons(200, 0.2, 42);
  const auto r = run_training_experiment(data, training_spec(Algorithm::diffgrad), TrainingConfig{});
  EXPECT_GE(r.final_accuracy, 0.90);
}

Trajectory with_thetas(std::initializer_list<double> thetas) {
  Trajectory t;
  long k = 0;
  for (double th : thetas) t.records.push_back({++k, 0.0, th, 0.0, 1.0});
  return t;
}

TEST(Oscillation, Metric) {
  EXPECT_EQ(oscillation_metric(with_thetas({3, 1, 1, 1, 1}), 4), 0.0);
  EXPECT_DOUBLE_EQ(oscillation_metric(with_thetas({9, 0.25, -0.25, 0.25, -0.25}), 4), 0.25);
  EXPECT_THROW(oscillation_metric(with_thetas({1, 2}), 0), UsageError);
  EXPECT_THROW(oscillation_metric(with_thetas({1, 2}), 3), UsageError);
}

}  // namespace
}  // namespace optbench
