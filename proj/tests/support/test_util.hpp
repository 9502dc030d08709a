#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

#include "optbench/optimizers.hpp"
#include "scalar_reference.hpp"

namespace optbench::testing {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo,
                                         double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline double rel_error(double a, double b, double floor = 1e-8) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
}

inline RefAlgo to_ref(Algorithm a) {
  switch (a) {
    case Algorithm::sgd: return RefAlgo::sgd;
    case Algorithm::sgdm: return RefAlgo::sgdm;
    case Algorithm::adagrad: return RefAlgo::adagrad;
    case Algorithm::adadelta: return RefAlgo::adadelta;
    case Algorithm::rmsprop: return RefAlgo::rmsprop;
    case Algorithm::adam: return RefAlgo::adam;
    case Algorithm::amsgrad: return RefAlgo::amsgrad;
    case Algorithm::diffgrad: return RefAlgo::diffgrad;
  }
  return RefAlgo::sgd;
}

inline RefFriction to_ref(FrictionVariant v) {
  switch (v) {
    case FrictionVariant::dfc0: return RefFriction::absval;
    case FrictionVariant::dfc1: return RefFriction::signed_;
    case FrictionVariant::dfc2: return RefFriction::stretched;
    case FrictionVariant::dfc3: return RefFriction::mean_std;
    case FrictionVariant::dfc4: return RefFriction::mean_var;
    case FrictionVariant::dfc5: return RefFriction::mean_sqrtstd;
    case FrictionVariant::unit: return RefFriction::none;
  }
  return RefFriction::none;
}

inline RefHyper to_ref(const OptimizerSpec& s) {
  RefHyper h;
  h.lr = s.lr;
  h.inv_sqrt_lr = s.lr_schedule == LrSchedule::inv_sqrt;
  h.beta1 = s.beta1;
  h.beta2 = s.beta2;
  h.momentum = s.momentum;
  h.rho = s.rho;
  h.eps = s.epsilon;
  h.eps_outside = s.eps_placement == EpsPlacement::outside_sqrt;
  h.friction = to_ref(s.dfc_variant);
  h.lambda = s.beta1_decay_lambda.value_or(0.0);
  return h;
}

/// Largest |vectorized - scalar reference| over `steps` random steps of a
/// `dim`-dimensional problem (gradients drawn fresh each step).
inline double max_oracle_divergence(const OptimizerSpec& spec, std::size_t dim, long steps,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> theta = random_vector(rng, dim, -1.0, 1.0);
  std::vector<RefCoord> ref(dim);
  for (std::size_t i = 0; i < dim; ++i) ref[i].theta = theta[i];
  OptimizerState state = OptimizerState::zeros(dim);
  const RefHyper h = to_ref(spec);
  const bool stats = needs_grad_stats(spec.dfc_variant) && spec.algorithm == Algorithm::diffgrad;
  double worst = 0.0;
  for (long t = 1; t <= steps; ++t) {
    const std::vector<double> g = random_vector(rng, dim, -2.0, 2.0);
    theta = step(state, theta, g, spec).updated_params;
    double mu = 0.0, nu = 0.0;
    if (stats) ref_abs_stats(g, mu, nu);
    for (std::size_t i = 0; i < dim; ++i) {
      ref_step(to_ref(spec.algorithm), h, t, g[i], ref[i], mu, nu);
      worst = std::max(worst, std::fabs(theta[i] - ref[i].theta));
    }
  }
  return worst;
}

}  // namespace optbench::testing

namespace optbench {

// Readable parameter values in test listings.
inline void PrintTo(Algorithm a, std::ostream* os) { *os << to_string(a); }
inline void PrintTo(FrictionVariant v, std::ostream* os) { *os << to_string(v); }

}  // namespace optbench
