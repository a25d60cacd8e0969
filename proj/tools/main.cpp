#include <iostream>

#include "negtax/cli.hpp"

int main(int argc, char** argv) {
  return negtax::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
