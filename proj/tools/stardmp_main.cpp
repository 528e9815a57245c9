#include <iostream>
#include <string>
#include <vector>

#include "stardmp/cli_app.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return stardmp::run_cli(args, std::cout, std::cerr);
}
