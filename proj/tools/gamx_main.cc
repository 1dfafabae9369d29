#include <iostream>
#include <string>
#include <vector>

#include "gamx/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gamx::RunCli(args, std::cout, std::cerr);
}
