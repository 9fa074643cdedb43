#include <iostream>
#include <string>
#include <vector>

#include "er2rel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return er2rel::run_cli(args, std::cin, std::cout, std::cerr);
}
