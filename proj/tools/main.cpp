#include <iostream>
#include <string>
#include <vector>

#include "cusp_atlas/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return cusp_atlas::cli::run(args, std::cout, std::cerr);
}
