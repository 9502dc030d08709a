#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "optbench/optimizers.hpp"

namespace optbench {

struct ValueGrad {
  double value;
  double grad;
};

// One-dimensional non-convex test functions. At each breakpoint the piece whose
// closed inequality (x <= a) contains the point supplies value and derivative.
// Non-finite x throws DomainError.

/// (x+0.3)^2 for x <= 0, (x-0.2)^2 + 0.05 otherwise. Global min at -0.3, local at 0.2.
ValueGrad eval_f1(double x);
/// Linear wall for x <= -0.9, x^3 + x sin(8x) + 0.85 otherwise.
ValueGrad eval_f2(double x);
/// Six-piece function with global minimum 0 at x = 0 and two flanking local minima.
ValueGrad eval_f3(double x);

struct Evaluation {
  double loss;
  ParamVector grad;
};

/// A differentiable scalar function of a parameter vector. `value` may be
/// supplied separately when the loss alone is much cheaper than loss+grad
/// (grid searches call it millions of times); it otherwise falls back to eval.
class Objective {
 public:
  using EvalFn = std::function<Evaluation(std::span<const double>)>;
  using ValueFn = std::function<double(std::span<const double>)>;

  Objective(std::string name, std::size_t dim, EvalFn eval, ValueFn value = {});

  Evaluation eval(std::span<const double> x) const;
  double value(std::span<const double> x) const;

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

 private:
  void check_dim(std::span<const double> x) const;

  std::string name_;
  std::size_t dim_;
  EvalFn eval_;
  ValueFn value_;
};

Objective make_f1_objective();
Objective make_f2_objective();
Objective make_f3_objective();

/// scale * sum_i (x_i - c_i)^2. Throws UsageError unless scale > 0.
Objective make_quadratic(ParamVector center, double scale);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h per coordinate.
ParamVector finite_diff_grad(const Objective& objective, std::span<const double> x, double h);

struct LossAndGrad {
  double loss;
  ParamVector grad;
};

/// Softmax cross-entropy of one sample; grad is softmax(scores) - onehot(label).
LossAndGrad cross_entropy_loss(std::span<const double> scores, std::size_t label);

/// sum_i theta_i^2 with gradient 2 theta.
LossAndGrad regularization_loss(std::span<const double> params);

}  // namespace optbench
