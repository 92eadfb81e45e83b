#include <iostream>

#include "dlog/cli.hpp"

int main(int argc, char** argv) {
  return dlog::run_cli(argc, argv, std::cout, std::cerr);
}
