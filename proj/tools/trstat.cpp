#include <iostream>

#include "trstat/app/commands.hpp"

int main(int argc, char** argv) {
  return trstat::app::run_cli(argc, argv, std::cout, std::cerr);
}
