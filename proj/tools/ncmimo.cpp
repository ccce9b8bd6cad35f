#include <iostream>

#include "ncmimo/cli.hpp"

int main(int argc, char** argv) { return ncmimo::run_cli(argc, argv, std::cout, std::cerr); }
