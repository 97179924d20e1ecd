#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dvbai/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  dvbai::cli::Terminal term;
  term.color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
  return dvbai::cli::run_cli(args, std::cout, std::cerr, term);
}
