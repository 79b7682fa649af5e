#include <iostream>
#include <string>
#include <vector>

#include "pfg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pfg::run_cli(args, std::cout, std::cerr);
}
