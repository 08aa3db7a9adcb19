#include "cli.h"

#include <iostream>

int main(int argc, char **argv) {
  return minisa::cli::run(minisa::cli::Command::Tidy, {argv + 1, argv + argc}, std::cout,
                          std::cerr);
}
