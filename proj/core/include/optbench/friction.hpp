#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace optbench {

/// Friction-coefficient family applied to the Adam step by diffGrad.
/// `dfc0` is the canonical AbsSig form; `dfc1`..`dfc5` are the signed,
/// stretched and gradient-statistics variants; `unit` pins the coefficient
/// to 1 so diffGrad degenerates to Adam.
enum class FrictionVariant { dfc0, dfc1, dfc2, dfc3, dfc4, dfc5, unit };

struct GradStats {
  double mean = 0.0;    // mean of |g_i|
  double stddev = 0.0;  // population std of |g_i|
};

struct FrictionRange {
  double lower;
  double upper;
  bool lower_inclusive;
};

/// 1 / (1 + e^{-|x|}); lands in [0.5, 1). Throws DomainError on non-finite x.
double abs_sig(double x);

/// Friction coefficient for a single coordinate given the gradient change
/// delta_g = g_{t-1} - g_t. Variants dfc3..dfc5 need `stats`; the others
/// reject it.
double dfc(FrictionVariant variant, double delta_g,
           std::optional<GradStats> stats = std::nullopt);

/// Mean and population standard deviation of |g_i| over the whole vector.
GradStats grad_batch_stats(std::span<const double> grads);

bool needs_grad_stats(FrictionVariant variant) noexcept;

/// Legal output interval of `variant` over finite inputs (upper is open).
FrictionRange dfc_range(FrictionVariant variant) noexcept;

std::string_view to_string(FrictionVariant variant) noexcept;
FrictionVariant parse_friction_variant(std::string_view name);

}  // namespace optbench
