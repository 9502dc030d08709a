#include "optbench/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "optbench/errors.hpp"

namespace optbench {
namespace {

void require_finite(double x, const char* op) {
  if (!std::isfinite(x)) throw DomainError(std::string(op) + ": non-finite input");
}

Objective scalar_objective(std::string name, ValueGrad (*fn)(double)) {
  return Objective(
      std::move(name), 1,
      [fn](std::span<const double> x) {
        const ValueGrad r = fn(x[0]);
        return Evaluation{r.value, ParamVector{r.grad}};
      },
      [fn](std::span<const double> x) { return fn(x[0]).value; });
}

}  // namespace

ValueGrad eval_f1(double x) {
  require_finite(x, "eval_f1");
  if (x <= 0.0) {
    const double d = x + 0.3;
    return {d * d, 2.0 * d};
  }
  const double d = x - 0.2;
  return {d * d + 0.05, 2.0 * d};
}

ValueGrad eval_f2(double x) {
  require_finite(x, "eval_f2");
  if (x <= -0.9) return {-40.0 * x - 35.15, -40.0};
  const double s = std::sin(8.0 * x);
  const double c = std::cos(8.0 * x);
  return {x * x * x + x * s + 0.85, 3.0 * x * x + s + 8.0 * x * c};
}

ValueGrad eval_f3(double x) {
  require_finite(x, "eval_f3");
  if (x <= -0.5) return {x * x, 2.0 * x};
  if (x <= -0.4) return {0.75 + x, 1.0};
  if (x <= 0.0) return {-7.0 * x / 8.0, -7.0 / 8.0};
  if (x <= 0.4) return {7.0 * x / 8.0, 7.0 / 8.0};
  if (x <= 0.5) return {0.75 - x, -1.0};
  return {x * x, 2.0 * x};
}

Objective::Objective(std::string name, std::size_t dim, EvalFn eval, ValueFn value)
    : name_(std::move(name)), dim_(dim), eval_(std::move(eval)), value_(std::move(value)) {
  if (dim_ == 0) throw UsageError("objective '" + name_ + "' must have dim >= 1");
  if (!eval_) throw UsageError("objective '" + name_ + "' has no evaluator");
}

void Objective::check_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw UsageError("objective '" + name_ + "' expects " + std::to_string(dim_) +
                     " parameters, got " + std::to_string(x.size()));
  }
}

Evaluation Objective::eval(std::span<const double> x) const {
  check_dim(x);
  return eval_(x);
}

double Objective::value(std::span<const double> x) const {
  check_dim(x);
  return value_ ? value_(x) : eval_(x).loss;
}

Objective make_f1_objective() { return scalar_objective("f1", &eval_f1); }
Objective make_f2_objective() { return scalar_objective("f2", &eval_f2); }
Objective make_f3_objective() { return scalar_objective("f3", &eval_f3); }

Objective make_quadratic(ParamVector center, double scale) {
  if (!(scale > 0.0)) throw UsageError("make_quadratic: scale must be positive");
  if (center.empty()) throw UsageError("make_quadratic: center must be non-empty");
  const std::size_t dim = center.size();
  auto value = [center, scale](std::span<const double> x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - center[i];
      sum += d * d;
    }
    return scale * sum;
  };
  auto eval = [center, scale, value](std::span<const double> x) {
    ParamVector grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = 2.0 * scale * (x[i] - center[i]);
    return Evaluation{value(x), std::move(grad)};
  };
  return Objective("quadratic", dim, std::move(eval), std::move(value));
}

ParamVector finite_diff_grad(const Objective& objective, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw UsageError("finite_diff_grad: step h must be positive");
  ParamVector probe(x.begin(), x.end());
  ParamVector grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + h;
    const double up = objective.value(probe);
    probe[i] = saved - h;
    const double down = objective.value(probe);
    probe[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

LossAndGrad cross_entropy_loss(std::span<const double> scores, std::size_t label) {
  if (scores.empty()) throw UsageError("cross_entropy_loss: empty score vector");
  if (label >= scores.size()) {
    throw UsageError("cross_entropy_loss: label " + std::to_string(label) +
                     " out of range for " + std::to_string(scores.size()) + " classes");
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  ParamVector probs(scores.size());
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    probs[k] = std::exp(scores[k] - top);
    total += probs[k];
  }
  const double loss = std::log(total) - (scores[label] - top);
  for (double& p : probs) p /= total;
  probs[label] -= 1.0;
  return {std::max(loss, 0.0), std::move(probs)};
}

LossAndGrad regularization_loss(std::span<const double> params) {
  double sum = 0.0;
  ParamVector grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    sum += params[i] * params[i];
    grad[i] = 2.0 * params[i];
  }
  return {sum, std::move(grad)};
}

}  // namespace optbench
