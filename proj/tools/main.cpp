#include <iostream>

#include "localp1/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return localp1::run_command(args, std::cout, std::cerr);
}
