#include "frontlim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return frontlim::run_cli(argc, argv, std::cout, std::cerr); }
