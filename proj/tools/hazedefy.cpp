#include <iostream>
#include <string>
#include <vector>

#include "hazedefy/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv, argv + argc);
  return hazedefy::cli::run(args, std::cin, std::cout, std::cerr);
}
