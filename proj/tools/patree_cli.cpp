#include <iostream>

#include "patree/cli.hpp"

int main(int argc, char** argv) { return patree::run_cli(argc, argv, std::cout, std::cerr); }
