#include <iostream>
#include <vector>

#include "qbmsym/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qbmsym::run_cli(args, std::cout, std::cerr);
}
