#include <iostream>
#include <string>
#include <vector>

#include "cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << growthlab::cli::usage();
    return growthlab::cli::kExitParse;
  }
  if (args.size() == 1 && args[0] == "--version") {
    std::cout << "growthlab " << growthlab::cli::kToolVersion << "\n";
    return 0;
  }
  return growthlab::cli::run_args(args, std::cout, std::cerr);
}
