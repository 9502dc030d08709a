#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env_seed;
  if (const char* seed = std::getenv("OPTBENCH_SEED")) env_seed = seed;
  return optbench::cli::run(args, env_seed, std::cout, std::cerr);
}
