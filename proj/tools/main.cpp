#include <iostream>
#include <string>
#include <vector>

#include "cheb2d/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cheb2d::run_cli(args, std::cout, std::cerr);
}
