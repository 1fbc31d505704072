#include <iostream>

#include "wgwin/cli.hpp"

int main(int argc, char** argv) {
  return wgwin::cli::run(argc, argv, std::cout, std::cerr);
}
