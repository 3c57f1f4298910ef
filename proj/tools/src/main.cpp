#include <iostream>
#include <string>
#include <vector>

#include "rwl1cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rwl1::cli::run(args, std::cout, std::cerr);
}
