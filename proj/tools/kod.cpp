#include <iostream>
#include <string>
#include <vector>

#include "kod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kod::run(args, std::cout, std::cerr);
}
