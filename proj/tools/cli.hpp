#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optbench/friction.hpp"
#include "optbench/harness.hpp"
#include "optbench/optimizers.hpp"

namespace optbench::cli {

enum class Subcommand { synthetic, train, regret, compare };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Fully resolved invocation: every default is already filled in. Optional
/// hyperparameters stay empty when the algorithm's own default applies.
struct RunConfig {
  Subcommand subcommand = Subcommand::synthetic;
  SyntheticFunction function = SyntheticFunction::f1;
  std::vector<Algorithm> optimizers;
  FrictionVariant variant = FrictionVariant::dfc0;
  std::optional<double> lr;
  std::optional<double> beta1;
  std::optional<double> beta2;
  std::optional<double> eps;
  std::optional<EpsPlacement> eps_placement;
  long iters = 0;
  double theta0 = 0.0;
  long epochs = 0;
  std::size_t batch = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<std::string> summary;

  bool operator==(const RunConfig&) const = default;
};

/// Parses `args` (without the program name). `env_seed` is the value of
/// OPTBENCH_SEED, used when no --seed is given. Throws UsageError naming the
/// offending token.
RunConfig parse_args(std::span<const std::string> args,
                     std::optional<std::string> env_seed = std::nullopt);

/// Config-file form (`key = value` lines) of every option in `config`.
std::string to_config_text(const RunConfig& config);

/// Optimizer spec for `algorithm` under this config's subcommand defaults and overrides.
OptimizerSpec resolve_spec(const RunConfig& config, Algorithm algorithm);

/// Runs the subcommand, writing the declared files and a short report to `out`.
/// Throws on failure; see run() for the exit-status mapping.
int dispatch(const RunConfig& config, std::ostream& out);

/// parse_args + dispatch with exit statuses 0 (ok), 1 (runtime failure), 2 (usage).
int run(std::span<const std::string> args, std::optional<std::string> env_seed,
        std::ostream& out, std::ostream& err);

std::string_view to_string(Subcommand sub) noexcept;

}  // namespace optbench::cli
