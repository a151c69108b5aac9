#include <iostream>
#include <string>
#include <vector>

#include "htype/cli.hpp"

int main(int argc, char** argv) {
  return htype::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
