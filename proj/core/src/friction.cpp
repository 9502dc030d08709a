#include "optbench/friction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "optbench/errors.hpp"

namespace optbench {
namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + ": non-finite input");
  }
}

}  // namespace

double abs_sig(double x) {
  require_finite(x, "abs_sig");
  return logistic(std::fabs(x));
}

bool needs_grad_stats(FrictionVariant variant) noexcept {
  return variant == FrictionVariant::dfc3 || variant == FrictionVariant::dfc4 ||
         variant == FrictionVariant::dfc5;
}

double dfc(FrictionVariant variant, double delta_g, std::optional<GradStats> stats) {
  require_finite(delta_g, "dfc");
  if (needs_grad_stats(variant) != stats.has_value()) {
    throw UsageError(std::string("dfc: variant ") + std::string(to_string(variant)) +
                     (stats ? " takes no gradient statistics"
                            : " requires gradient statistics (mu, nu)"));
  }
  if (stats) {
    require_finite(stats->mean, "dfc mu");
    require_finite(stats->stddev, "dfc nu");
    if (stats->stddev < 0.0) throw DomainError("dfc: nu must be non-negative");
  }
  const double mag = std::fabs(delta_g);
  switch (variant) {
    case FrictionVariant::dfc0:
      return logistic(mag);
    case FrictionVariant::dfc1:
      return logistic(delta_g);
    case FrictionVariant::dfc2:
      return 9.0 / (1.0 + std::exp(-0.5 * mag)) - 4.0;
    case FrictionVariant::dfc3:
      return logistic(stats->stddev * mag - stats->mean);
    case FrictionVariant::dfc4:
      return logistic(stats->stddev * stats->stddev * mag - stats->mean);
    case FrictionVariant::dfc5:
      return logistic(std::sqrt(stats->stddev) * mag - stats->mean);
    case FrictionVariant::unit:
      return 1.0;
  }
  throw UsageError("dfc: unknown variant");
}

GradStats grad_batch_stats(std::span<const double> grads) {
  if (grads.empty()) throw UsageError("grad_batch_stats: empty gradient vector");
  // Summed in sorted order so the result does not depend on coordinate order.
  std::vector<double> mags(grads.size());
  std::transform(grads.begin(), grads.end(), mags.begin(),
                 [](double g) { return std::fabs(g); });
  std::sort(mags.begin(), mags.end());
  const auto n = static_cast<double>(mags.size());
  double sum = 0.0;
  for (double a : mags) sum += a;
  const double mean = sum / n;
  double sq = 0.0;
  for (double a : mags) sq += (a - mean) * (a - mean);
  return {mean, std::sqrt(sq / n)};
}

FrictionRange dfc_range(FrictionVariant variant) noexcept {
  switch (variant) {
    case FrictionVariant::dfc0:
      return {0.5, 1.0, true};
    case FrictionVariant::dfc2:
      return {0.5, 5.0, true};
    case FrictionVariant::unit:
      return {1.0, 1.0, true};
    case FrictionVariant::dfc1:
    case FrictionVariant::dfc3:
    case FrictionVariant::dfc4:
    case FrictionVariant::dfc5:
      break;
  }
  return {0.0, 1.0, false};
}

std::string_view to_string(FrictionVariant variant) noexcept {
  switch (variant) {
    case FrictionVariant::dfc0: return "dfc0";
    case FrictionVariant::dfc1: return "dfc1";
    case FrictionVariant::dfc2: return "dfc2";
    case FrictionVariant::dfc3: return "dfc3";
    case FrictionVariant::dfc4: return "dfc4";
    case FrictionVariant::dfc5: return "dfc5";
    case FrictionVariant::unit: return "unit";
  }
  return "?";
}

FrictionVariant parse_friction_variant(std::string_view name) {
  for (auto v : {FrictionVariant::dfc0, FrictionVariant::dfc1, FrictionVariant::dfc2,
                 FrictionVariant::dfc3, FrictionVariant::dfc4, FrictionVariant::dfc5,
                 FrictionVariant::unit}) {
    if (to_string(v) == name) return v;
  }
  throw UsageError("unknown friction variant '" + std::string(name) + "'");
}

}  // namespace optbench
