#include "optbench/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optbench/errors.hpp"

namespace optbench {
namespace {

void check_shapes(const OptimizerState& state, std::span<const double> params,
                  std::span<const double> grads, const char* op) {
  if (params.size() != grads.size()) {
    throw UsageError(std::string(op) + ": params has " + std::to_string(params.size()) +
                     " entries but grads has " + std::to_string(grads.size()));
  }
  const std::size_t n = params.size();
  if (state.m.size() != n || state.v.size() != n || state.v_max.size() != n ||
      state.accum_g2.size() != n || state.accum_dx2.size() != n ||
      state.prev_grad.size() != n) {
    throw UsageError(std::string(op) + ": optimizer state sized for " +
                     std::to_string(state.dim()) + " parameters, got " + std::to_string(n));
  }
}

StepReport begin(OptimizerState& state, std::span<const double> params,
                 std::span<const double> grads, const char* op) {
  check_shapes(state, params, grads, op);
  ++state.t;
  return StepReport{ParamVector(params.begin(), params.end()), 1.0, 0.0};
}

void apply(StepReport& report, std::size_t i, double delta) {
  report.updated_params[i] += delta;
  report.max_abs_update = std::max(report.max_abs_update, std::fabs(delta));
}

double denominator(double second_moment, double eps, EpsPlacement placement) {
  return placement == EpsPlacement::inside_sqrt ? std::sqrt(second_moment + eps)
                                                : std::sqrt(second_moment) + eps;
}

enum class MomentRule { adam, amsgrad, diffgrad };

// Shared body of the three bias-corrected moment methods. They differ only in
// which second moment feeds the denominator and in the friction factor.
StepReport moment_step(OptimizerState& state, std::span<const double> params,
                       std::span<const double> grads, const OptimizerSpec& spec,
                       MomentRule rule, const char* op) {
  if (rule == MomentRule::diffgrad && needs_grad_stats(spec.dfc_variant) && grads.empty()) {
    throw UsageError(std::string(op) + ": variant " +
                     std::string(to_string(spec.dfc_variant)) +
                     " needs a non-empty gradient vector");
  }
  StepReport report = begin(state, params, grads, op);
  const long t = state.t;
  const double lr = learning_rate_at(spec, t);
  double beta1_t = spec.beta1;
  if (spec.beta1_decay_lambda) {
    beta1_t *= std::pow(*spec.beta1_decay_lambda, static_cast<double>(t - 1));
  }
  const double bc1 = 1.0 - std::pow(spec.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(spec.beta2, static_cast<double>(t));

  std::optional<GradStats> stats;
  if (rule == MomentRule::diffgrad && needs_grad_stats(spec.dfc_variant)) {
    stats = grad_batch_stats(grads);
  }

  double dfc_sum = 0.0;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double g = grads[i];
    state.m[i] = beta1_t * state.m[i] + (1.0 - beta1_t) * g;
    state.v[i] = spec.beta2 * state.v[i] + (1.0 - spec.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;

    double second = v_hat;
    double xi = 1.0;
    switch (rule) {
      case MomentRule::adam:
        break;
      case MomentRule::amsgrad:
        state.v_max[i] = std::max(state.v_max[i], v_hat);
        second = state.v_max[i];
        break;
      case MomentRule::diffgrad:
        xi = dfc(spec.dfc_variant, state.prev_grad[i] - g, stats);
        state.prev_grad[i] = g;
        dfc_sum += xi;
        break;
    }
    apply(report, i, -lr * xi * m_hat / denominator(second, spec.epsilon, spec.eps_placement));
  }
  if (rule == MomentRule::diffgrad && !grads.empty()) {
    report.mean_dfc = dfc_sum / static_cast<double>(grads.size());
  }
  return report;
}

}  // namespace

OptimizerSpec OptimizerSpec::defaults(Algorithm algorithm) {
  OptimizerSpec spec;
  spec.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::sgd:
    case Algorithm::sgdm:
    case Algorithm::adagrad:
      spec.lr = 1e-2;
      break;
    case Algorithm::adadelta:
      spec.lr = 1.0;  // unused by the rule
      spec.epsilon = 1e-6;
      break;
    case Algorithm::rmsprop:
      spec.beta2 = 0.99;
      break;
    case Algorithm::adam:
    case Algorithm::amsgrad:
      break;
    case Algorithm::diffgrad:
      spec.epsilon = 1e-7;
      spec.eps_placement = EpsPlacement::outside_sqrt;
      break;
  }
  return spec;
}

void OptimizerSpec::validate() const {
  auto unit_interval = [](double x) { return x >= 0.0 && x < 1.0; };
  if (!(lr > 0.0) || !std::isfinite(lr)) throw UsageError("lr must be a positive finite number");
  if (!unit_interval(beta1)) throw UsageError("beta1 must lie in [0, 1)");
  if (!unit_interval(beta2)) throw UsageError("beta2 must lie in [0, 1)");
  if (!unit_interval(momentum)) throw UsageError("momentum must lie in [0, 1)");
  if (!unit_interval(rho)) throw UsageError("rho must lie in [0, 1)");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw UsageError("epsilon must be a positive finite number");
  }
  if (dfc_variant == FrictionVariant::unit && algorithm != Algorithm::diffgrad) {
    throw UsageError("friction variant 'unit' is only meaningful for diffgrad");
  }
  if (beta1_decay_lambda && !(*beta1_decay_lambda > 0.0 && *beta1_decay_lambda < 1.0)) {
    throw UsageError("beta1 decay lambda must lie in (0, 1)");
  }
}

OptimizerState OptimizerState::zeros(std::size_t dim) {
  OptimizerState s;
  s.m.assign(dim, 0.0);
  s.v.assign(dim, 0.0);
  s.v_max.assign(dim, 0.0);
  s.accum_g2.assign(dim, 0.0);
  s.accum_dx2.assign(dim, 0.0);
  s.prev_grad.assign(dim, 0.0);
  return s;
}

double learning_rate_at(const OptimizerSpec& spec, long t) {
  if (spec.lr_schedule == LrSchedule::inv_sqrt) {
    return spec.lr / std::sqrt(static_cast<double>(std::max(t, 1L)));
  }
  return spec.lr;
}

StepReport sgd_step(OptimizerState& state, std::span<const double> params,
                    std::span<const double> grads, const OptimizerSpec& spec) {
  StepReport report = begin(state, params, grads, "sgd_step");
  const double lr = learning_rate_at(spec, state.t);
  for (std::size_t i = 0; i < grads.size(); ++i) apply(report, i, -lr * grads[i]);
  return report;
}

StepReport sgdm_step(OptimizerState& state, std::span<const double> params,
                     std::span<const double> grads, const OptimizerSpec& spec) {
  StepReport report = begin(state, params, grads, "sgdm_step");
  const double lr = learning_rate_at(spec, state.t);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    // No (1 - beta) factor on the gradient.
    state.m[i] = spec.momentum * state.m[i] + grads[i];
    apply(report, i, -lr * state.m[i]);
  }
  return report;
}

StepReport adagrad_step(OptimizerState& state, std::span<const double> params,
                        std::span<const double> grads, const OptimizerSpec& spec) {
  StepReport report = begin(state, params, grads, "adagrad_step");
  const double lr = learning_rate_at(spec, state.t);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    state.accum_g2[i] += grads[i] * grads[i];
    apply(report, i, -lr * grads[i] / std::sqrt(state.accum_g2[i] + spec.epsilon));
  }
  return report;
}

StepReport adadelta_step(OptimizerState& state, std::span<const double> params,
                         std::span<const double> grads, const OptimizerSpec& spec) {
  StepReport report = begin(state, params, grads, "adadelta_step");
  const double rho = spec.rho;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double g = grads[i];
    // v holds the running average of g^2, accum_dx2 that of the applied update.
    state.v[i] = rho * state.v[i] + (1.0 - rho) * g * g;
    const double delta =
        -(std::sqrt(state.accum_dx2[i] + spec.epsilon) / std::sqrt(state.v[i] + spec.epsilon)) *
        g;
    state.accum_dx2[i] = rho * state.accum_dx2[i] + (1.0 - rho) * delta * delta;
    apply(report, i, delta);
  }
  return report;
}

StepReport rmsprop_step(OptimizerState& state, std::span<const double> params,
                        std::span<const double> grads, const OptimizerSpec& spec) {
  StepReport report = begin(state, params, grads, "rmsprop_step");
  const double lr = learning_rate_at(spec, state.t);
  const double decay = spec.beta2;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double g = grads[i];
    state.v[i] = decay * state.v[i] + (1.0 - decay) * g * g;
    apply(report, i, -lr * g / std::sqrt(state.v[i] + spec.epsilon));
  }
  return report;
}

StepReport adam_step(OptimizerState& state, std::span<const double> params,
                     std::span<const double> grads, const OptimizerSpec& spec) {
  return moment_step(state, params, grads, spec, MomentRule::adam, "adam_step");
}

StepReport amsgrad_step(OptimizerState& state, std::span<const double> params,
                        std::span<const double> grads, const OptimizerSpec& spec) {
  return moment_step(state, params, grads, spec, MomentRule::amsgrad, "amsgrad_step");
}

StepReport diffgrad_step(OptimizerState& state, std::span<const double> params,
                         std::span<const double> grads, const OptimizerSpec& spec) {
  return moment_step(state, params, grads, spec, MomentRule::diffgrad, "diffgrad_step");
}

StepReport step(OptimizerState& state, std::span<const double> params,
                std::span<const double> grads, const OptimizerSpec& spec) {
  switch (spec.algorithm) {
    case Algorithm::sgd: return sgd_step(state, params, grads, spec);
    case Algorithm::sgdm: return sgdm_step(state, params, grads, spec);
    case Algorithm::adagrad: return adagrad_step(state, params, grads, spec);
    case Algorithm::adadelta: return adadelta_step(state, params, grads, spec);
    case Algorithm::rmsprop: return rmsprop_step(state, params, grads, spec);
    case Algorithm::adam: return adam_step(state, params, grads, spec);
    case Algorithm::amsgrad: return amsgrad_step(state, params, grads, spec);
    case Algorithm::diffgrad: return diffgrad_step(state, params, grads, spec);
  }
  throw UsageError("step: unknown algorithm");
}

Optimizer::Optimizer(OptimizerSpec spec, std::size_t dim)
    : Optimizer(spec, OptimizerState::zeros(dim)) {}

Optimizer::Optimizer(OptimizerSpec spec, OptimizerState state)
    : spec_(spec), state_(std::move(state)) {
  spec_.validate();
}

StepReport Optimizer::step(std::span<const double> params, std::span<const double> grads) {
  return optbench::step(state_, params, grads, spec_);
}

StepReport Optimizer::step_in_place(std::span<double> params, std::span<const double> grads) {
  StepReport report = optbench::step(state_, params, grads, spec_);
  std::copy(report.updated_params.begin(), report.updated_params.end(), params.begin());
  return report;
}

void Optimizer::reset() { state_ = OptimizerState::zeros(state_.dim()); }

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::sgd: return "sgd";
    case Algorithm::sgdm: return "sgdm";
    case Algorithm::adagrad: return "adagrad";
    case Algorithm::adadelta: return "adadelta";
    case Algorithm::rmsprop: return "rmsprop";
    case Algorithm::adam: return "adam";
    case Algorithm::amsgrad: return "amsgrad";
    case Algorithm::diffgrad: return "diffgrad";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw UsageError("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(EpsPlacement placement) noexcept {
  return placement == EpsPlacement::inside_sqrt ? "inside" : "outside";
}

EpsPlacement parse_eps_placement(std::string_view name) {
  if (name == "inside") return EpsPlacement::inside_sqrt;
  if (name == "outside") return EpsPlacement::outside_sqrt;
  throw UsageError("unknown epsilon placement '" + std::string(name) + "'");
}

}  // namespace optbench
