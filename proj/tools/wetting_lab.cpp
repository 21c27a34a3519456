#include <iostream>
#include <string>
#include <vector>

#include "wetting/lab.hpp"

int main(int argc, char** argv) {
  return wetting::run_lab(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
