#include <iostream>

#include "polyrep/cli.hpp"

int main(int argc, char** argv) {
  return polyrep::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
