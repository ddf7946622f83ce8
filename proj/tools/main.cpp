#include <iostream>
#include <string>
#include <vector>

#include "gcollage/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gcollage::cli::run(std::move(args), std::cout, std::cerr);
}
