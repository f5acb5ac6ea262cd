#include <iostream>

#include "fracbv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fracbv::run(args, std::cout, std::cerr);
}
