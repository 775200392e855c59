#include <iostream>

#include "scottlab/cli.hpp"

int main(int argc, char** argv) {
  return scottlab::cli::run(argc, argv, std::cout, std::cerr);
}
