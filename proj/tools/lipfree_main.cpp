#include <iostream>
#include <string>
#include <vector>

#include "lipfree/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lipfree::run_cli(args, std::cout, std::cerr);
}
