#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "optbench/harness.hpp"
#include "optbench/objectives.hpp"
#include "optbench/optimizers.hpp"

namespace optbench {

struct RegretReport {
  // R(t) for t = 1..T, all measured against the horizon-T comparator theta_star.
  std::vector<double> regret_per_t;
  ParamVector theta_star;
  // (T_k, R(T_k) / T_k) where each R(T_k) uses the best grid point for horizon T_k.
  std::vector<std::pair<long, double>> avg_regret_samples;
  std::optional<double> bound_value;

  [[nodiscard]] double total() const { return regret_per_t.empty() ? 0.0 : regret_per_t.back(); }
};

/// Online regret of the iterates `thetas` against the best fixed point on
/// `feasible_grid`: R(T) = sum_t f_t(theta_t) - min_c sum_t f_t(c).
/// `checkpoints` (each in [1, T]) additionally get their own comparator.
RegretReport compute_regret(std::span<const Objective> losses,
                            std::span<const ParamVector> thetas,
                            std::span<const ParamVector> feasible_grid,
                            std::span<const long> checkpoints = {});

/// Evenly spaced 1-D candidates lo, lo + step, ..., hi.
std::vector<ParamVector> uniform_grid_1d(double lo, double hi, double step);

/// Everything the three-term regret bound for diffGrad reads.
struct BoundInputs {
  double D = 0.0;       // l2 diameter of the iterates
  double D_inf = 0.0;   // l-infinity diameter
  double G_inf = 0.0;   // bound on |g_{t,i}|
  double alpha = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double lambda = 0.0;
  std::vector<ParamVector> grad_history;  // [i][t] = g_{t,i}
  ParamVector vhat_T;                     // bias-corrected second moment after T steps
  ParamVector g1;                         // first gradient
};

/// gamma = beta1^2 / sqrt(beta2).
double bound_gamma(double beta1, double beta2);

/// Evaluates
///   D^2 / (2 alpha (1 - beta1)) * sum_i (1 + e^{-|g_{1,i}|}) sqrt(T vhat_{T,i})
/// + alpha (1 + beta1) G_inf / ((1 - beta1) sqrt(1 - beta2) (1 - gamma)^2) * sum_i ||g_{1:T,i}||_2
/// + sum_i D_inf^2 G_inf sqrt(1 - beta2) / (2 alpha (1 - beta1) (1 - lambda)^2).
/// Throws PreconditionError when gamma >= 1 or lambda is outside (0, 1).
double theorem1_bound(const BoundInputs& inputs);

/// Stochastic convex quadratic sequence f_t(theta) = scale * (theta - c_t)^2 with
/// c_t = center + noise * N(0, 1), drawn from `seed`.
struct RegretConfig {
  OptimizerSpec spec = default_spec();
  long iters = 2000;
  double center = 0.5;
  double noise = 0.5;
  double scale = 1.0;
  double theta0 = 0.0;
  double grid_lo = -2.0;
  double grid_hi = 2.0;
  double grid_step = 1e-4;
  std::uint64_t seed = 42;
  std::vector<long> checkpoints = {200, 2000};

  /// diffGrad with alpha_t = 0.1 / sqrt(t).
  static OptimizerSpec default_spec();
};

struct RegretRun {
  RegretReport report;
  Trajectory trajectory;
  BoundInputs bound_inputs;
  bool iterates_in_grid = false;
};

/// Runs the optimizer over the sequence and measures regret. The bound is
/// evaluated (into report.bound_value) only when the first-moment decay
/// schedule is active and every iterate stayed within the grid; bound
/// constants are measured from the realised run.
RegretRun run_regret_experiment(const RegretConfig& config);

}  // namespace optbench
