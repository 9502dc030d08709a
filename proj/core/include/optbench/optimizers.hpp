#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "optbench/friction.hpp"

namespace optbench {

using ParamVector = std::vector<double>;

enum class Algorithm { sgd, sgdm, adagrad, adadelta, rmsprop, adam, amsgrad, diffgrad };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::sgd,     Algorithm::sgdm, Algorithm::adagrad, Algorithm::adadelta,
    Algorithm::rmsprop, Algorithm::adam, Algorithm::amsgrad, Algorithm::diffgrad};

// Where epsilon enters the denominator: sqrt(v + eps) or sqrt(v) + eps.
enum class EpsPlacement { inside_sqrt, outside_sqrt };

enum class LrSchedule {
  constant,  // alpha_t = alpha
  inv_sqrt,  // alpha_t = alpha / sqrt(t)
};

/// Algorithm choice plus every hyperparameter any of the eight rules reads.
/// Fields a rule does not use are ignored by it. Build one with
/// `OptimizerSpec::defaults(algorithm)` to get that algorithm's epsilon,
/// epsilon placement and decay defaults.
struct OptimizerSpec {
  Algorithm algorithm = Algorithm::adam;
  double lr = 1e-3;
  LrSchedule lr_schedule = LrSchedule::constant;
  double beta1 = 0.9;
  double beta2 = 0.999;  // also the RMSProp decay
  double momentum = 0.9;
  double rho = 0.9;
  double epsilon = 1e-8;
  EpsPlacement eps_placement = EpsPlacement::inside_sqrt;
  FrictionVariant dfc_variant = FrictionVariant::dfc0;
  // First-moment decay beta1_t = beta1 * lambda^(t-1); off when empty.
  std::optional<double> beta1_decay_lambda;

  static OptimizerSpec defaults(Algorithm algorithm);

  /// Throws UsageError when a field is outside its legal range.
  void validate() const;

  bool operator==(const OptimizerSpec&) const = default;
};

/// Per-coordinate buffers carried between steps. Unused buffers stay zero.
struct OptimizerState {
  long t = 0;
  ParamVector m;
  ParamVector v;
  ParamVector v_max;
  ParamVector accum_g2;
  ParamVector accum_dx2;
  ParamVector prev_grad;

  static OptimizerState zeros(std::size_t dim);
  [[nodiscard]] std::size_t dim() const noexcept { return m.size(); }

  bool operator==(const OptimizerState&) const = default;
};

struct StepReport {
  ParamVector updated_params;
  double mean_dfc = 1.0;
  double max_abs_update = 0.0;

  bool operator==(const StepReport&) const = default;
};

// Each rule increments state.t, reads hyperparameters from spec and returns
// the new parameters. Throws UsageError on length mismatches.
StepReport sgd_step(OptimizerState& state, std::span<const double> params,
                    std::span<const double> grads, const OptimizerSpec& spec);
StepReport sgdm_step(OptimizerState& state, std::span<const double> params,
                     std::span<const double> grads, const OptimizerSpec& spec);
StepReport adagrad_step(OptimizerState& state, std::span<const double> params,
                        std::span<const double> grads, const OptimizerSpec& spec);
StepReport adadelta_step(OptimizerState& state, std::span<const double> params,
                         std::span<const double> grads, const OptimizerSpec& spec);
StepReport rmsprop_step(OptimizerState& state, std::span<const double> params,
                        std::span<const double> grads, const OptimizerSpec& spec);
StepReport adam_step(OptimizerState& state, std::span<const double> params,
                     std::span<const double> grads, const OptimizerSpec& spec);
StepReport amsgrad_step(OptimizerState& state, std::span<const double> params,
                        std::span<const double> grads, const OptimizerSpec& spec);
StepReport diffgrad_step(OptimizerState& state, std::span<const double> params,
                         std::span<const double> grads, const OptimizerSpec& spec);

/// Dispatches on spec.algorithm.
StepReport step(OptimizerState& state, std::span<const double> params,
                std::span<const double> grads, const OptimizerSpec& spec);

/// Learning rate in effect at iteration t (t >= 1).
double learning_rate_at(const OptimizerSpec& spec, long t);

/// Owns a spec and its state; the usual entry point for training loops.
class Optimizer {
 public:
  Optimizer(OptimizerSpec spec, std::size_t dim);
  Optimizer(OptimizerSpec spec, OptimizerState state);

  StepReport step(std::span<const double> params, std::span<const double> grads);

  // Applies the step to `params` in place and returns the report metadata.
  StepReport step_in_place(std::span<double> params, std::span<const double> grads);

  void reset();

  [[nodiscard]] const OptimizerSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const OptimizerState& state() const noexcept { return state_; }

 private:
  OptimizerSpec spec_;
  OptimizerState state_;
};

std::string_view to_string(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(EpsPlacement placement) noexcept;
EpsPlacement parse_eps_placement(std::string_view name);

}  // namespace optbench
