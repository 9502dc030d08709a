#pragma once

// Per-coordinate scalar restatement of every update rule, written
// independently of core/src/optimizers.cpp and used only to cross-check it.
// Each coordinate carries its own little state record; nothing is shared
// between coordinates except the DFC3-5 gradient statistics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace optbench::testing {

enum class RefAlgo { sgd, sgdm, adagrad, adadelta, rmsprop, adam, amsgrad, diffgrad };
enum class RefFriction { absval, signed_, stretched, mean_std, mean_var, mean_sqrtstd, none };

struct RefHyper {
  double lr = 1e-3;
  bool inv_sqrt_lr = false;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double momentum = 0.9;
  double rho = 0.9;
  double eps = 1e-8;
  bool eps_outside = false;
  RefFriction friction = RefFriction::absval;
  double lambda = 0.0;  // 0 = no first-moment decay
};

struct RefCoord {
  double theta = 0.0;
  double mom = 0.0;   // SGDM velocity or Adam first moment
  double sec = 0.0;   // second-moment style average
  double peak = 0.0;  // AMSGrad running max of vhat
  double sumsq = 0.0; // AdaGrad accumulator
  double upd = 0.0;   // AdaDelta squared-update average
  double last_g = 0.0;
};

inline double ref_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double ref_friction(RefFriction f, double change, double mu, double nu) {
  const double a = change < 0 ? -change : change;
  switch (f) {
    case RefFriction::absval: return ref_sigmoid(a);
    case RefFriction::signed_: return ref_sigmoid(change);
    case RefFriction::stretched: return 9.0 * ref_sigmoid(0.5 * a) - 4.0;
    case RefFriction::mean_std: return ref_sigmoid(nu * a - mu);
    case RefFriction::mean_var: return ref_sigmoid(nu * nu * a - mu);
    case RefFriction::mean_sqrtstd: return ref_sigmoid(std::sqrt(nu) * a - mu);
    case RefFriction::none: return 1.0;
  }
  return 1.0;
}

/// Advances one coordinate at iteration t (1-based). mu/nu are only read by
/// the statistics-based friction forms.
inline void ref_step(RefAlgo algo, const RefHyper& h, long t, double g, RefCoord& c,
                     double mu = 0.0, double nu = 0.0) {
  const double alpha = h.inv_sqrt_lr ? h.lr / std::sqrt(static_cast<double>(t)) : h.lr;
  switch (algo) {
    case RefAlgo::sgd:
      c.theta = c.theta - alpha * g;
      return;
    case RefAlgo::sgdm:
      c.mom = h.momentum * c.mom + g;
      c.theta = c.theta - alpha * c.mom;
      return;
    case RefAlgo::adagrad:
      c.sumsq = c.sumsq + g * g;
      c.theta = c.theta - alpha * g / std::sqrt(c.sumsq + h.eps);
      return;
    case RefAlgo::adadelta: {
      c.sec = h.rho * c.sec + (1.0 - h.rho) * g * g;
      const double rms_upd = std::sqrt(c.upd + h.eps);
      const double rms_grad = std::sqrt(c.sec + h.eps);
      const double dx = -(rms_upd / rms_grad) * g;
      c.upd = h.rho * c.upd + (1.0 - h.rho) * dx * dx;
      c.theta = c.theta + dx;
      return;
    }
    case RefAlgo::rmsprop:
      c.sec = h.beta2 * c.sec + (1.0 - h.beta2) * g * g;
      c.theta = c.theta - alpha * g / std::sqrt(c.sec + h.eps);
      return;
    case RefAlgo::adam:
    case RefAlgo::amsgrad:
    case RefAlgo::diffgrad: {
      double b1 = h.beta1;
      if (h.lambda > 0.0) b1 = h.beta1 * std::pow(h.lambda, static_cast<double>(t - 1));
      c.mom = b1 * c.mom + (1.0 - b1) * g;
      c.sec = h.beta2 * c.sec + (1.0 - h.beta2) * g * g;
      const double mhat = c.mom / (1.0 - std::pow(h.beta1, static_cast<double>(t)));
      double vhat = c.sec / (1.0 - std::pow(h.beta2, static_cast<double>(t)));
      double xi = 1.0;
      if (algo == RefAlgo::amsgrad) {
        c.peak = std::max(c.peak, vhat);
        vhat = c.peak;
      }
      if (algo == RefAlgo::diffgrad) {
        xi = ref_friction(h.friction, c.last_g - g, mu, nu);
        c.last_g = g;
      }
      const double denom = h.eps_outside ? std::sqrt(vhat) + h.eps : std::sqrt(vhat + h.eps);
      c.theta = c.theta - alpha * xi * mhat / denom;
      return;
    }
  }
}

/// Mean and population std of |g|, computed the textbook two-pass way.
inline void ref_abs_stats(const std::vector<double>& g, double& mu, double& nu) {
  double s = 0.0;
  for (double x : g) s += std::fabs(x);
  mu = s / static_cast<double>(g.size());
  double q = 0.0;
  for (double x : g) q += (std::fabs(x) - mu) * (std::fabs(x) - mu);
  nu = std::sqrt(q / static_cast<double>(g.size()));
}

}  // namespace optbench::testing
