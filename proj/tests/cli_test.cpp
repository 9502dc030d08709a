#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "optbench/errors.hpp"
#include "optbench/io.hpp"

namespace optbench::cli {
namespace {

namespace fs = std::filesystem;

using Args = std::vector<std::string>;

std::string usage_message(const Args& args) {
  try {
    parse_args(args);
  } catch (const UsageError& e) {
    return e.what();
  }
  return {};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "optbench_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ParseArgs, SyntheticDefaults) {
  const RunConfig c = parse_args(Args{"synthetic", "--function", "f1", "--optimizer", "diffgrad"});
  EXPECT_EQ(c.subcommand, Subcommand::synthetic);
  EXPECT_EQ(c.function, SyntheticFunction::f1);
  EXPECT_EQ(c.optimizers, std::vector{Algorithm::diffgrad});
  EXPECT_EQ(c.iters, 300);
  EXPECT_EQ(c.theta0, -1.0);
  const OptimizerSpec spec = resolve_spec(c, Algorithm::diffgrad);
  EXPECT_EQ(spec.beta1, 0.95);
  EXPECT_EQ(spec.beta2, 0.999);
  EXPECT_EQ(spec.lr, 0.1);
}

TEST(ParseArgs, UsageErrorsNameTheToken) {
  EXPECT_NE(usage_message({"synthetic", "--function", "f9"}).find("f9"), std::string::npos);
  EXPECT_NE(usage_message({"train", "--seed", "42", "--seed", "42"}).find("duplicate"),
            std::string::npos);
  EXPECT_NE(usage_message({"synthetic", "--bogus", "1"}).find("bogus"), std::string::npos);
  EXPECT_NE(usage_message({"synthetic", "--lr", "fast"}).find("fast"), std::string::npos);
  EXPECT_NE(usage_message({"synthetic", "--epochs", "3"}).find("epochs"), std::string::npos);
  EXPECT_NE(usage_message({"synthetic", "--lr"}).find("--lr"), std::string::npos);
  EXPECT_NE(usage_message({"launch"}).find("launch"), std::string::npos);
  EXPECT_FALSE(usage_message({}).empty());
  EXPECT_FALSE(usage_message({"synthetic", "--optimizer", "all"}).empty());
  EXPECT_FALSE(usage_message({"synthetic", "--optimizer", "adam,diffgrad"}).empty());
  EXPECT_FALSE(usage_message({"compare"}).empty());  // --out required
  EXPECT_FALSE(usage_message({"synthetic", "--iters", "0"}).empty());
  EXPECT_FALSE(usage_message({"synthetic", "--lr", "-1"}).empty());
  EXPECT_FALSE(usage_message({"synthetic", "--beta1", "1"}).empty());
}

TEST(ParseArgs, SeedFallsBackToEnvironment) {
  EXPECT_EQ(parse_args(Args{"train"}, "7").seed, 7u);
  EXPECT_EQ(parse_args(Args{"train", "--seed", "9"}, "7").seed, 9u);
  EXPECT_EQ(parse_args(Args{"train"}).seed, 42u);
  EXPECT_THROW(parse_args(Args{"train"}, "seven"), UsageError);
}

TEST(ParseArgs, CompareAcceptsListsAndAll) {
  const auto c = parse_args(Args{"compare", "--optimizer", "all", "--out", "x"});
  EXPECT_EQ(c.optimizers.size(), 8u);
  const auto d = parse_args(Args{"compare", "--optimizer", "adam,amsgrad", "--out", "x"});
  EXPECT_EQ(d.optimizers, (std::vector{Algorithm::adam, Algorithm::amsgrad}));
  EXPECT_THROW(parse_args(Args{"compare", "--optimizer", "adam,adam", "--out", "x"}), UsageError);
}

TEST(ConfigFile, FlagsOverrideFileAndUnknownKeysRejected) {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.conf";
  {
    std::ofstream f(cfg);
    f << "# comment\n\nfunction = f2\nlr = 0.05   # trailing comment\niters = 12\n";
  }
  const auto c = parse_args(Args{"synthetic", "--config", cfg.string(), "--iters", "20"});
  EXPECT_EQ(c.function, SyntheticFunction::f2);
  EXPECT_EQ(c.lr, 0.05);
  EXPECT_EQ(c.iters, 20);

  {
    std::ofstream f(cfg);
    f << "colour = blue\n";
  }
  EXPECT_NE(usage_message({"synthetic", "--config", cfg.string()}).find("colour"),
            std::string::npos);
  {
    std::ofstream f(cfg);
    f << "iters = 1\niters = 2\n";
  }
  EXPECT_THROW(parse_args(Args{"synthetic", "--config", cfg.string()}), UsageError);
  EXPECT_THROW(parse_args(Args{"synthetic", "--config", (dir / "missing").string()}), UsageError);
}

TEST(ConfigFile, SerializeReparseIsIdentity) {
  const fs::path dir = fresh_dir("roundtrip");
  const std::vector<Args> cases = {
      {"synthetic", "--function", "f3", "--optimizer", "amsgrad", "--lr", "0.0123456789",
       "--eps", "1e-9", "--eps-placement", "outside", "--theta0", "0.25", "--out", "a.csv"},
      {"train", "--optimizer", "sgdm", "--epochs", "5", "--batch", "10", "--seed", "3",
       "--beta1", "0.8", "--svg", "t.svg"},
      {"regret", "--iters", "300", "--variant", "dfc3", "--summary", "s.csv"},
      {"compare", "--optimizer", "all", "--out", "dir", "--beta2", "0.99"},
  };
  for (const auto& args : cases) {
    const RunConfig original = parse_args(args);
    const fs::path cfg = dir / "rt.conf";
    {
      std::ofstream f(cfg);
      f << to_config_text(original);
    }
    const RunConfig back = parse_args(Args{args[0], "--config", cfg.string()});
    EXPECT_EQ(back, original) << to_config_text(original);
  }
}

TEST(Dispatch, SyntheticCreatesExactlyDeclaredFiles) {
  const fs::path dir = fresh_dir("synthetic");
  std::ostringstream out, err;
  const Args args = {"synthetic", "--function", "f1", "--optimizer", "diffgrad",
                     "--out", (dir / "run.csv").string(), "--svg", (dir / "run.svg").string()};
  ASSERT_EQ(run(args, std::nullopt, out, err), kExitOk) << err.str();
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path().filename().string());
  std::sort(files.begin(), files.end());
  EXPECT_EQ(files, (std::vector<std::string>{"run.csv", "run.svg"}));
  EXPECT_EQ(read_trajectory_csv(dir / "run.csv").records.size(), 300u);
}

TEST(Dispatch, CompareOrdersDiffgradBelowAdamOnF1) {
  const fs::path dir = fresh_dir("compare");
  std::ostringstream out, err;
  const Args args = {"compare", "--function", "f1", "--optimizer", "adam,diffgrad",
                     "--out", dir.string()};
  ASSERT_EQ(run(args, std::nullopt, out, err), kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(dir / "adam.csv"));
  EXPECT_TRUE(fs::exists(dir / "diffgrad.csv"));
  std::istringstream summary(slurp(dir / "summary.csv"));
  std::string line;
  std::getline(summary, line);
  EXPECT_EQ(line, "optimizer,final_loss,final_theta,oscillation");
  std::map<std::string, double> final_loss;
  while (std::getline(summary, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    final_loss[line.substr(0, c1)] = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
  }
  ASSERT_EQ(final_loss.size(), 2u);
  EXPECT_LT(final_loss["diffgrad"], final_loss["adam"]);
}

TEST(Dispatch, RegretWithBadGammaExitsOne) {
  std::ostringstream out, err;
  const Args args = {"regret", "--beta1", "0.99", "--beta2", "0.5", "--iters", "50"};
  EXPECT_EQ(run(args, std::nullopt, out, err), kExitFailure);
  EXPECT_NE(err.str().find("gamma"), std::string::npos);
}

TEST(Dispatch, RegretSummary) {
  const fs::path dir = fresh_dir("regret");
  std::ostringstream out, err;
  const Args args = {"regret", "--iters", "400", "--summary", (dir / "s.csv").string()};
  ASSERT_EQ(run(args, std::nullopt, out, err), kExitOk) << err.str();
  const std::string s = slurp(dir / "s.csv");
  EXPECT_EQ(s.rfind("key,value\n", 0), 0u);
  EXPECT_NE(s.find("avg_regret_200,"), std::string::npos);
  EXPECT_NE(s.find("avg_regret_400,"), std::string::npos);
  EXPECT_EQ(s.find("not_applicable"), std::string::npos);
}

TEST(Dispatch, ExitStatuses) {
  std::ostringstream out, err;
  EXPECT_EQ(run(Args{"synthetic", "--function", "f9"}, std::nullopt, out, err), kExitUsage);
  const fs::path dir = fresh_dir("exit");
  std::ofstream(dir / "plain") << "x";
  EXPECT_EQ(run(Args{"synthetic", "--iters", "5", "--out", (dir / "plain" / "y.csv").string()},
                std::nullopt, out, err),
            kExitFailure);
  EXPECT_EQ(run(Args{"synthetic", "--iters", "5"}, std::nullopt, out, err), kExitOk);
  std::ostringstream help;
  EXPECT_EQ(run(Args{"--help"}, std::nullopt, help, err), kExitOk);
  EXPECT_EQ(help.str().rfind("usage: optbench", 0), 0u);
}

TEST(Dispatch, TrainIsDeterministic) {
  const fs::path dir = fresh_dir("train");
  for (const char* name : {"a", "b"}) {
    std::ostringstream out, err;
    const Args args = {"train", "--epochs", "5", "--seed", "11",
                       "--out", (dir / (std::string(name) + ".csv")).string(),
                       "--svg", (dir / (std::string(name) + ".svg")).string()};
    ASSERT_EQ(run(args, std::nullopt, out, err), kExitOk) << err.str();
  }
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.svg"), slurp(dir / "b.svg"));
}

}  // namespace
}  // namespace optbench::cli
