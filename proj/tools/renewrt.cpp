#include <iostream>
#include <string>
#include <vector>

#include "renewrt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return renewrt::cli::run(args, std::cout, std::cerr);
}
