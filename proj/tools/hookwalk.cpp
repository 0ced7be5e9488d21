#include <iostream>

#include "hookwalk/cli.hpp"

int main(int argc, char** argv) {
  return hookwalk::cli::run(argc, argv, std::cout, std::cerr);
}
