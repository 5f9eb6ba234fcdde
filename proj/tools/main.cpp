#include <iostream>
#include <string>
#include <vector>

#include "hybridlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hybridlab::cli::run(args, std::cout, std::cerr);
}
