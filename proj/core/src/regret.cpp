#include "optbench/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "optbench/errors.hpp"
#include "optbench/rng.hpp"

namespace optbench {

RegretReport compute_regret(std::span<const Objective> losses,
                            std::span<const ParamVector> thetas,
                            std::span<const ParamVector> feasible_grid,
                            std::span<const long> checkpoints) {
  if (losses.size() != thetas.size()) {
    throw UsageError("compute_regret: " + std::to_string(losses.size()) + " losses but " +
                     std::to_string(thetas.size()) + " iterates");
  }
  if (feasible_grid.empty()) throw UsageError("compute_regret: empty feasible grid");
  const auto T = static_cast<long>(losses.size());
  for (long c : checkpoints) {
    if (c < 1 || c > T) {
      throw UsageError("compute_regret: checkpoint " + std::to_string(c) + " outside [1, " +
                       std::to_string(T) + "]");
    }
  }

  std::vector<double> online(losses.size());
  for (std::size_t t = 0; t < losses.size(); ++t) online[t] = losses[t].value(thetas[t]);

  // Best cumulative comparator loss at each checkpoint, and at T itself.
  std::vector<double> best(checkpoints.size(), std::numeric_limits<double>::infinity());
  double best_total = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t c = 0; c < feasible_grid.size(); ++c) {
    double running = 0.0;
    for (long t = 1; t <= T; ++t) {
      running += losses[static_cast<std::size_t>(t - 1)].value(feasible_grid[c]);
      for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        if (checkpoints[k] == t) best[k] = std::min(best[k], running);
      }
    }
    if (running < best_total) {
      best_total = running;
      best_index = c;
    }
  }

  RegretReport report;
  report.theta_star = feasible_grid[best_index];
  report.regret_per_t.resize(losses.size());
  double cumulative = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t) {
    cumulative += online[t] - losses[t].value(report.theta_star);
    report.regret_per_t[t] = cumulative;
  }
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const long horizon = checkpoints[k];
    double online_sum = 0.0;
    for (long t = 0; t < horizon; ++t) online_sum += online[static_cast<std::size_t>(t)];
    report.avg_regret_samples.emplace_back(horizon,
                                           (online_sum - best[k]) / static_cast<double>(horizon));
  }
  return report;
}

std::vector<ParamVector> uniform_grid_1d(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw UsageError("uniform_grid_1d: need step > 0 and hi >= lo");
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  std::vector<ParamVector> grid;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid.push_back({lo + static_cast<double>(k) * step});
  }
  return grid;
}

double bound_gamma(double beta1, double beta2) { return beta1 * beta1 / std::sqrt(beta2); }

double theorem1_bound(const BoundInputs& in) {
  const double gamma = bound_gamma(in.beta1, in.beta2);
  if (!(gamma < 1.0)) {
    throw PreconditionError("regret bound requires beta1^2/sqrt(beta2) < 1, got gamma = " +
                            std::to_string(gamma));
  }
  if (!(in.lambda > 0.0 && in.lambda < 1.0)) {
    throw PreconditionError("regret bound requires lambda in (0, 1)");
  }
  if (!(in.alpha > 0.0)) throw PreconditionError("regret bound requires alpha > 0");
  if (!(in.beta1 >= 0.0 && in.beta1 < 1.0 && in.beta2 >= 0.0 && in.beta2 < 1.0)) {
    throw PreconditionError("regret bound requires beta1, beta2 in [0, 1)");
  }
  const std::size_t d = in.vhat_T.size();
  if (d == 0 || in.g1.size() != d || in.grad_history.size() != d) {
    throw UsageError("theorem1_bound: inconsistent dimensions in bound inputs");
  }
  const auto T = static_cast<double>(in.grad_history.front().size());

  double first_sum = 0.0;
  double second_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    first_sum += (1.0 + std::exp(-std::fabs(in.g1[i]))) * std::sqrt(T * in.vhat_T[i]);
    double sq = 0.0;
    for (double g : in.grad_history[i]) sq += g * g;
    second_sum += std::sqrt(sq);
  }
  const double one_m_b1 = 1.0 - in.beta1;
  const double first = in.D * in.D / (2.0 * in.alpha * one_m_b1) * first_sum;
  const double second = in.alpha * (1.0 + in.beta1) * in.G_inf /
                        (one_m_b1 * std::sqrt(1.0 - in.beta2) * (1.0 - gamma) * (1.0 - gamma)) *
                        second_sum;
  const double one_m_l = 1.0 - in.lambda;
  const double third = static_cast<double>(d) * in.D_inf * in.D_inf * in.G_inf *
                       std::sqrt(1.0 - in.beta2) / (2.0 * in.alpha * one_m_b1 * one_m_l * one_m_l);
  return first + second + third;
}

OptimizerSpec RegretConfig::default_spec() {
  OptimizerSpec spec = OptimizerSpec::defaults(Algorithm::diffgrad);
  spec.lr = 0.1;
  spec.lr_schedule = LrSchedule::inv_sqrt;
  return spec;
}

RegretRun run_regret_experiment(const RegretConfig& config) {
  if (config.iters < 1) throw UsageError("regret experiment needs at least one iteration");
  config.spec.validate();
  if (config.spec.beta1_decay_lambda) {
    // Fail before spending the run when the bound cannot be evaluated.
    const double gamma = bound_gamma(config.spec.beta1, config.spec.beta2);
    if (!(gamma < 1.0)) {
      throw PreconditionError("regret bound requires beta1^2/sqrt(beta2) < 1, got gamma = " +
                              std::to_string(gamma));
    }
  }

  SplitMix64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Objective> losses;
  losses.reserve(static_cast<std::size_t>(config.iters));
  for (long t = 0; t < config.iters; ++t) {
    losses.push_back(make_quadratic({config.center + config.noise * gauss(rng)}, config.scale));
  }

  Optimizer opt(config.spec, 1);
  ParamVector theta{config.theta0};
  std::vector<ParamVector> thetas;
  thetas.reserve(losses.size());
  RegretRun run;
  run.trajectory.spec = config.spec;
  run.trajectory.objective_name = "stochastic_quadratic";
  run.trajectory.seed = config.seed;
  run.bound_inputs.grad_history.assign(1, {});
  for (long t = 1; t <= config.iters; ++t) {
    const Evaluation e = losses[static_cast<std::size_t>(t - 1)].eval(theta);
    thetas.push_back(theta);
    run.bound_inputs.grad_history[0].push_back(e.grad[0]);
    run.bound_inputs.G_inf = std::max(run.bound_inputs.G_inf, std::fabs(e.grad[0]));
    const StepReport rep = opt.step_in_place(theta, e.grad);
    run.trajectory.records.push_back({t, e.loss, thetas.back()[0], std::fabs(e.grad[0]),
                                      rep.mean_dfc});
  }

  const auto grid = uniform_grid_1d(config.grid_lo, config.grid_hi, config.grid_step);
  run.report = compute_regret(losses, thetas, grid, config.checkpoints);

  run.iterates_in_grid = std::all_of(thetas.begin(), thetas.end(), [&](const ParamVector& p) {
    return p[0] >= config.grid_lo && p[0] <= config.grid_hi;
  });

  // Diameters over the iterates together with the comparator.
  double lo = run.report.theta_star[0];
  double hi = lo;
  for (const auto& p : thetas) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  BoundInputs& b = run.bound_inputs;
  b.D = hi - lo;
  b.D_inf = hi - lo;
  b.alpha = config.spec.lr;
  b.beta1 = config.spec.beta1;
  b.beta2 = config.spec.beta2;
  b.lambda = config.spec.beta1_decay_lambda.value_or(0.0);
  b.g1 = {b.grad_history[0].front()};
  const double bc2 = 1.0 - std::pow(config.spec.beta2, static_cast<double>(config.iters));
  b.vhat_T = {opt.state().v[0] / bc2};

  if (config.spec.beta1_decay_lambda && run.iterates_in_grid) {
    run.report.bound_value = theorem1_bound(b);
  }
  return run;
}

}  // namespace optbench
