#include <iostream>
#include <string>
#include <vector>

#include "dmx/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dmx::cli::run_cli(args, std::cout, std::cerr);
}
