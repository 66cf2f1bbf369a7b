#include <iostream>

#include "chatnet/cli/commands.hpp"

int main(int argc, char** argv) {
  return chatnet::cli::run(argc, argv, std::cout, std::cerr);
}
