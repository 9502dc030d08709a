#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "optbench/errors.hpp"
#include "optbench/io.hpp"
#include "optbench/regret.hpp"

namespace optbench::cli {
namespace {

namespace fs = std::filesystem;

constexpr long kOscillationWindow = 50;
constexpr std::uint64_t kDefaultSeed = 42;
constexpr double kTwoMoonsNoise = 0.2;
constexpr std::size_t kTwoMoonsSize = 200;
constexpr double kBoundLambda = 1.0 - 1e-8;

const std::vector<std::string_view> kCommonFlags = {
    "config", "optimizer", "variant", "lr", "beta1", "beta2", "eps", "eps-placement",
    "seed",   "out",       "svg"};

std::vector<std::string_view> flags_for(Subcommand sub) {
  std::vector<std::string_view> flags = kCommonFlags;
  switch (sub) {
    case Subcommand::synthetic:
      flags.insert(flags.end(), {"function", "iters", "theta0"});
      break;
    case Subcommand::compare:
      flags.insert(flags.end(), {"function", "iters", "theta0", "summary"});
      break;
    case Subcommand::train:
      flags.insert(flags.end(), {"epochs", "batch"});
      break;
    case Subcommand::regret:
      flags.insert(flags.end(), {"iters", "summary"});
      break;
  }
  return flags;
}

bool known_anywhere(std::string_view name) {
  for (auto sub : {Subcommand::synthetic, Subcommand::train, Subcommand::regret,
                   Subcommand::compare}) {
    const auto flags = flags_for(sub);
    if (std::find(flags.begin(), flags.end(), name) != flags.end()) return true;
  }
  return false;
}

Subcommand parse_subcommand(std::string_view token) {
  for (auto sub : {Subcommand::synthetic, Subcommand::train, Subcommand::regret,
                   Subcommand::compare}) {
    if (to_string(sub) == token) return sub;
  }
  throw UsageError("unknown subcommand '" + std::string(token) +
                   "' (expected synthetic, train, regret or compare)");
}

// Options gathered from argv and the config file, keyed by flag name.
using OptionMap = std::map<std::string, std::string, std::less<>>;

void check_allowed(Subcommand sub, std::string_view name, std::string_view origin) {
  const auto flags = flags_for(sub);
  if (std::find(flags.begin(), flags.end(), name) != flags.end()) return;
  if (known_anywhere(name)) {
    throw UsageError(std::string(origin) + " '" + std::string(name) + "' is not valid for '" +
                     std::string(to_string(sub)) + "'");
  }
  throw UsageError("unknown " + std::string(origin) + " '" + std::string(name) + "'");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

OptionMap read_config_file(Subcommand sub, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  OptionMap options;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    const std::string where = path + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw UsageError(where + ": expected 'key = value', got '" + std::string(view) + "'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key == "config") throw UsageError(where + ": config files cannot include 'config'");
    check_allowed(sub, key, "config key");
    if (!options.emplace(key, value).second) {
      throw UsageError(where + ": duplicate config key '" + key + "'");
    }
  }
  return options;
}

template <typename T>
T parse_number(std::string_view name, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid value '" + std::string(text) + "' for --" + std::string(name));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw UsageError("invalid value '" + std::string(text) + "' for --" + std::string(name));
    }
  }
  return value;
}

template <typename Fn>
auto parse_named(std::string_view name, std::string_view text, Fn&& fn) {
  try {
    return fn(text);
  } catch (const UsageError&) {
    throw UsageError("invalid value '" + std::string(text) + "' for --" + std::string(name));
  }
}

std::vector<Algorithm> parse_optimizer_list(Subcommand sub, std::string_view text) {
  std::vector<Algorithm> list;
  if (text == "all") {
    if (sub != Subcommand::compare) {
      throw UsageError("--optimizer all is only valid for 'compare'");
    }
    return {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  }
  while (true) {
    const auto comma = text.find(',');
    const std::string_view name = text.substr(0, comma);
    const Algorithm a = parse_named("optimizer", name, [](std::string_view s) {
      return parse_algorithm(s);
    });
    if (std::find(list.begin(), list.end(), a) != list.end()) {
      throw UsageError("optimizer '" + std::string(name) + "' listed twice");
    }
    list.push_back(a);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (list.size() > 1 && sub != Subcommand::compare) {
    throw UsageError("'" + std::string(to_string(sub)) + "' takes exactly one --optimizer");
  }
  return list;
}

RunConfig defaults_for(Subcommand sub, std::uint64_t seed) {
  RunConfig c;
  c.subcommand = sub;
  c.seed = seed;
  c.theta0 = SyntheticDefaults::theta0;
  c.iters = SyntheticDefaults::iters;
  switch (sub) {
    case Subcommand::synthetic:
      c.optimizers = {Algorithm::diffgrad};
      break;
    case Subcommand::compare:
      c.optimizers = {Algorithm::adam, Algorithm::diffgrad};
      break;
    case Subcommand::train: {
      const TrainingConfig tc;
      c.optimizers = {Algorithm::diffgrad};
      c.epochs = tc.epochs;
      c.batch = tc.batch_size;
      c.iters = 0;
      c.theta0 = 0.0;
      break;
    }
    case Subcommand::regret: {
      const RegretConfig rc;
      c.optimizers = {Algorithm::diffgrad};
      c.iters = rc.iters;
      c.theta0 = rc.theta0;
      break;
    }
  }
  return c;
}

void write_summary_csv(const fs::path& path, const std::vector<std::string>& rows) {
  std::string text;
  for (const auto& r : rows) text += r + "\n";
  write_text_file(path, text);
}

void ensure_parent(const fs::path& path) {
  const fs::path parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
}

Series theta_series(const std::string& name, const Trajectory& traj) {
  Series s{name, {}};
  for (const auto& r : traj.records) s.points.emplace_back(static_cast<double>(r.t), r.theta);
  return s;
}

Series loss_series(const std::string& name, const Trajectory& traj) {
  Series s{name, {}};
  for (const auto& r : traj.records) s.points.emplace_back(static_cast<double>(r.t), r.loss);
  return s;
}

int run_synthetic(const RunConfig& c, std::ostream& out) {
  const Algorithm algo = c.optimizers.front();
  Trajectory traj = run_synthetic_experiment(c.function, resolve_spec(c, algo), c.theta0, c.iters);
  traj.seed = c.seed;
  if (c.out) {
    ensure_parent(*c.out);
    write_trajectory_csv(traj, *c.out);
  }
  if (c.svg) {
    ensure_parent(*c.svg);
    render_svg_lines({loss_series(std::string(to_string(algo)), traj)}, *c.svg,
                     "loss on " + std::string(to_string(c.function)));
  }
  out << "optimizer=" << to_string(algo) << " function=" << to_string(c.function)
      << " final_loss=" << format_real(traj.back().loss)
      << " final_theta=" << format_real(traj.back().theta) << '\n';
  return kExitOk;
}

int run_compare(const RunConfig& c, std::ostream& out) {
  if (!c.out) throw UsageError("'compare' requires --out DIR");
  const fs::path dir(*c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

  // Each experiment owns its trajectory and output file; results are joined in list order.
  std::vector<std::future<Trajectory>> jobs;
  for (Algorithm algo : c.optimizers) {
    jobs.push_back(std::async(std::launch::async, [&c, algo] {
      Trajectory traj =
          run_synthetic_experiment(c.function, resolve_spec(c, algo), c.theta0, c.iters);
      traj.seed = c.seed;
      write_trajectory_csv(traj, fs::path(*c.out) / (std::string(to_string(algo)) + ".csv"));
      return traj;
    }));
  }
  std::vector<Trajectory> results;
  for (auto& job : jobs) results.push_back(job.get());

  std::vector<std::string> rows = {"optimizer,final_loss,final_theta,oscillation"};
  std::vector<Series> series;
  const auto window = static_cast<std::size_t>(std::min<long>(kOscillationWindow, c.iters));
  for (std::size_t k = 0; k < results.size(); ++k) {
    const std::string name(to_string(c.optimizers[k]));
    const Trajectory& traj = results[k];
    rows.push_back(name + "," + format_real(traj.back().loss) + "," +
                   format_real(traj.back().theta) + "," +
                   format_real(oscillation_metric(traj, window)));
    series.push_back(theta_series(name, traj));
  }
  const fs::path summary = c.summary ? fs::path(*c.summary) : dir / "summary.csv";
  ensure_parent(summary);
  write_summary_csv(summary, rows);
  if (c.svg) {
    ensure_parent(*c.svg);
    render_svg_lines(series, *c.svg, "theta on " + std::string(to_string(c.function)));
  }
  for (const auto& r : rows) out << r << '\n';
  return kExitOk;
}

int run_train(const RunConfig& c, std::ostream& out) {
  const Algorithm algo = c.optimizers.front();
  const Dataset data = generate_two_moons(kTwoMoonsSize, kTwoMoonsNoise, c.seed);
  TrainingConfig tc;
  tc.epochs = c.epochs;
  tc.batch_size = c.batch;
  tc.seed = c.seed;
  const TrainingResult result = run_training_experiment(data, resolve_spec(c, algo), tc);
  if (c.out) {
    ensure_parent(*c.out);
    write_trajectory_csv(result.trajectory, *c.out);
  }
  if (c.svg && !result.trajectory.empty()) {
    ensure_parent(*c.svg);
    render_svg_lines({loss_series(std::string(to_string(algo)), result.trajectory)}, *c.svg,
                     "training loss per epoch");
  }
  out << "optimizer=" << to_string(algo) << " epochs=" << c.epochs
      << " accuracy=" << format_real(result.final_accuracy) << '\n';
  return kExitOk;
}

int run_regret(const RunConfig& c, std::ostream& out) {
  RegretConfig rc;
  rc.spec = resolve_spec(c, c.optimizers.front());
  rc.iters = c.iters;
  rc.seed = c.seed;
  rc.checkpoints.clear();
  for (long k : {200L, 2000L}) {
    if (k <= c.iters) rc.checkpoints.push_back(k);
  }
  if (std::find(rc.checkpoints.begin(), rc.checkpoints.end(), c.iters) == rc.checkpoints.end()) {
    rc.checkpoints.push_back(c.iters);
  }
  const RegretRun run = run_regret_experiment(rc);

  if (c.out) {
    ensure_parent(*c.out);
    write_trajectory_csv(run.trajectory, *c.out);
  }
  if (c.svg) {
    ensure_parent(*c.svg);
    Series s{"R(t)", {}};
    for (std::size_t t = 0; t < run.report.regret_per_t.size(); ++t) {
      s.points.emplace_back(static_cast<double>(t + 1), run.report.regret_per_t[t]);
    }
    render_svg_lines({s}, *c.svg, "cumulative regret");
  }
  std::vector<std::string> rows = {"key,value"};
  rows.push_back("iters," + std::to_string(c.iters));
  rows.push_back("regret," + format_real(run.report.total()));
  rows.push_back("theta_star," + format_real(run.report.theta_star[0]));
  for (const auto& [T, avg] : run.report.avg_regret_samples) {
    rows.push_back("avg_regret_" + std::to_string(T) + "," + format_real(avg));
  }
  rows.push_back("bound," + (run.report.bound_value ? format_real(*run.report.bound_value)
                                                    : std::string("not_applicable")));
  if (c.summary) {
    ensure_parent(*c.summary);
    write_summary_csv(*c.summary, rows);
  }
  for (const auto& r : rows) out << r << '\n';
  return kExitOk;
}

}  // namespace

std::string_view to_string(Subcommand sub) noexcept {
  switch (sub) {
    case Subcommand::synthetic: return "synthetic";
    case Subcommand::train: return "train";
    case Subcommand::regret: return "regret";
    case Subcommand::compare: return "compare";
  }
  return "?";
}

RunConfig parse_args(std::span<const std::string> args, std::optional<std::string> env_seed) {
  if (args.empty()) throw UsageError("missing subcommand");
  const Subcommand sub = parse_subcommand(args[0]);

  OptionMap flags;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& token = args[i];
    if (token.size() < 3 || token.rfind("--", 0) != 0) {
      throw UsageError("unexpected argument '" + token + "'");
    }
    const std::string name = token.substr(2);
    check_allowed(sub, name, "flag");
    if (i + 1 >= args.size()) throw UsageError("missing value for '" + token + "'");
    if (!flags.emplace(name, args[++i]).second) {
      throw UsageError("duplicate flag '" + token + "'");
    }
  }

  OptionMap options;
  if (const auto it = flags.find("config"); it != flags.end()) {
    options = read_config_file(sub, it->second);
  }
  for (auto& [k, v] : flags) options.insert_or_assign(k, v);  // flags win
  options.erase("config");

  std::uint64_t seed = kDefaultSeed;
  if (env_seed && !options.contains("seed")) {
    seed = parse_number<std::uint64_t>("seed (OPTBENCH_SEED)", *env_seed);
  }
  RunConfig c = defaults_for(sub, seed);

  for (const auto& [name, value] : options) {
    if (name == "function") {
      c.function = parse_named(name, value, [](std::string_view s) {
        return parse_synthetic_function(s);
      });
    } else if (name == "optimizer") {
      c.optimizers = parse_optimizer_list(sub, value);
    } else if (name == "variant") {
      c.variant = parse_named(name, value, [](std::string_view s) {
        return parse_friction_variant(s);
      });
    } else if (name == "lr") {
      c.lr = parse_number<double>(name, value);
    } else if (name == "beta1") {
      c.beta1 = parse_number<double>(name, value);
    } else if (name == "beta2") {
      c.beta2 = parse_number<double>(name, value);
    } else if (name == "eps") {
      c.eps = parse_number<double>(name, value);
    } else if (name == "eps-placement") {
      c.eps_placement = parse_named(name, value, [](std::string_view s) {
        return parse_eps_placement(s);
      });
    } else if (name == "iters") {
      c.iters = parse_number<long>(name, value);
      if (c.iters < 1) throw UsageError("invalid value '" + value + "' for --iters (need >= 1)");
    } else if (name == "theta0") {
      c.theta0 = parse_number<double>(name, value);
    } else if (name == "epochs") {
      c.epochs = parse_number<long>(name, value);
      if (c.epochs < 0) throw UsageError("invalid value '" + value + "' for --epochs");
    } else if (name == "batch") {
      c.batch = parse_number<std::size_t>(name, value);
      if (c.batch < 1 || c.batch > kTwoMoonsSize) {
        throw UsageError("invalid value '" + value + "' for --batch (need 1.." +
                         std::to_string(kTwoMoonsSize) + ")");
      }
    } else if (name == "seed") {
      c.seed = parse_number<std::uint64_t>(name, value);
    } else if (name == "out") {
      c.out = value;
    } else if (name == "svg") {
      c.svg = value;
    } else if (name == "summary") {
      c.summary = value;
    }
  }
  if (sub == Subcommand::compare && !c.out) throw UsageError("'compare' requires --out DIR");
  for (Algorithm a : c.optimizers) resolve_spec(c, a).validate();
  return c;
}

OptimizerSpec resolve_spec(const RunConfig& c, Algorithm algorithm) {
  OptimizerSpec spec;
  switch (c.subcommand) {
    case Subcommand::synthetic:
    case Subcommand::compare:
      spec = synthetic_spec(algorithm);
      break;
    case Subcommand::train:
      spec = training_spec(algorithm);
      break;
    case Subcommand::regret:
      spec = OptimizerSpec::defaults(algorithm);
      spec.lr = RegretConfig::default_spec().lr;
      spec.lr_schedule = LrSchedule::inv_sqrt;
      if (algorithm == Algorithm::adam || algorithm == Algorithm::amsgrad ||
          algorithm == Algorithm::diffgrad) {
        spec.beta1_decay_lambda = kBoundLambda;
      }
      break;
  }
  if (algorithm == Algorithm::diffgrad) spec.dfc_variant = c.variant;
  if (c.lr) spec.lr = *c.lr;
  if (c.beta1) spec.beta1 = *c.beta1;
  if (c.beta2) spec.beta2 = *c.beta2;
  if (c.eps) spec.epsilon = *c.eps;
  if (c.eps_placement) spec.eps_placement = *c.eps_placement;
  return spec;
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream s;
  s << "# optbench " << to_string(c.subcommand) << " configuration\n";
  std::string opts;
  for (std::size_t k = 0; k < c.optimizers.size(); ++k) {
    opts += (k ? "," : "") + std::string(to_string(c.optimizers[k]));
  }
  s << "optimizer = " << opts << '\n';
  s << "variant = " << to_string(c.variant) << '\n';
  s << "seed = " << c.seed << '\n';
  if (c.lr) s << "lr = " << format_real(*c.lr) << '\n';
  if (c.beta1) s << "beta1 = " << format_real(*c.beta1) << '\n';
  if (c.beta2) s << "beta2 = " << format_real(*c.beta2) << '\n';
  if (c.eps) s << "eps = " << format_real(*c.eps) << '\n';
  if (c.eps_placement) s << "eps-placement = " << to_string(*c.eps_placement) << '\n';
  switch (c.subcommand) {
    case Subcommand::synthetic:
    case Subcommand::compare:
      s << "function = " << to_string(c.function) << '\n';
      s << "iters = " << c.iters << '\n';
      s << "theta0 = " << format_real(c.theta0) << '\n';
      break;
    case Subcommand::train:
      s << "epochs = " << c.epochs << '\n';
      s << "batch = " << c.batch << '\n';
      break;
    case Subcommand::regret:
      s << "iters = " << c.iters << '\n';
      break;
  }
  if (c.out) s << "out = " << *c.out << '\n';
  if (c.svg) s << "svg = " << *c.svg << '\n';
  if (c.summary) s << "summary = " << *c.summary << '\n';
  return s.str();
}

int dispatch(const RunConfig& config, std::ostream& out) {
  switch (config.subcommand) {
    case Subcommand::synthetic: return run_synthetic(config, out);
    case Subcommand::compare: return run_compare(config, out);
    case Subcommand::train: return run_train(config, out);
    case Subcommand::regret: return run_regret(config, out);
  }
  return kExitFailure;
}

constexpr const char* kUsage =
    "usage: optbench <synthetic|train|regret|compare> [--config PATH] [--function f1|f2|f3]"
    " [--optimizer NAME|all] [--variant dfc0..dfc5|unit] [--lr R] [--beta1 R]"
    " [--beta2 R] [--eps R] [--eps-placement inside|outside] [--iters N] [--theta0 R]"
    " [--epochs N] [--batch N] [--seed N] [--out PATH] [--svg PATH] [--summary PATH]\n";

int run(std::span<const std::string> args, std::optional<std::string> env_seed,
        std::ostream& out, std::ostream& err) {
  if (args.size() == 1 && (args[0] == "--help" || args[0] == "-h")) {
    out << kUsage;
    return kExitOk;
  }
  RunConfig config;
  try {
    config = parse_args(args, std::move(env_seed));
  } catch (const UsageError& e) {
    err << "optbench: usage error: " << e.what() << '\n' << kUsage;
    return kExitUsage;
  }
  try {
    return dispatch(config, out);
  } catch (const std::exception& e) {
    err << "optbench: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace optbench::cli
