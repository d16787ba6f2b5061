#include <iostream>
#include <string>
#include <vector>

#include "stochint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stochint::cli::run(args, std::cout, std::cerr);
}
