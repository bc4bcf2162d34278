#include "wpvol/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wpvol::run_cli(argc, argv, std::cout, std::cerr); }
