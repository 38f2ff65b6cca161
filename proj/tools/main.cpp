#include <string>
#include <vector>

#include "trajsmooth/cli.hpp"

int main(int argc, char** argv) {
  return trajsmooth::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
