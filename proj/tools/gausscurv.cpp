#include <string>
#include <vector>

#include "gausscurv/cli/run.hpp"

int main(int argc, char** argv) {
  return gausscurv::cli::main_entry(std::vector<std::string>(argv, argv + argc));
}
