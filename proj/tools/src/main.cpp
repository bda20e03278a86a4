#include <string>
#include <vector>

#include "experiments.hpp"

int main(int argc, char** argv) {
  return papal::cli::main_entry(std::vector<std::string>(argv, argv + argc));
}
