#include <iostream>

#include "rosetta/cli.hpp"

int main(int argc, char** argv) { return rosetta::run_cli(argc, argv, std::cout, std::cerr); }
