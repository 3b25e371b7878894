#include <iostream>

#include "treeprob/cli.hpp"

int main(int argc, char** argv) {
  return treeprob::cli::run(argc, argv, std::cout, std::cerr);
}
