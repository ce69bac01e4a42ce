#include <iostream>
#include <string>
#include <vector>

#include "skd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return skd::cli_main(args, std::cout, std::cerr);
}
