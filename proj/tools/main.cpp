#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return fejer::cli::run(argc, argv, std::cout, std::cerr);
}
