#include <iostream>
#include <string>
#include <vector>

#include "plfu/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return plfu::cli::run(args, std::cout, std::cerr);
}
