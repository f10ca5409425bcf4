#include <iostream>

#include "windadm/io/cli.hpp"

int main(int argc, char** argv) {
  return windadm::io::run_cli(argc, argv, std::cout, std::cerr);
}
