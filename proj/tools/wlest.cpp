#include <iostream>

#include "wlest/cli.hpp"

int main(int argc, char** argv) {
  return wlest::cli::run(argc, argv, std::cout, std::cerr);
}
