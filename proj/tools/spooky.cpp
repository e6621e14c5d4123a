#include <iostream>

#include "spooky/cli.hpp"

int main(int argc, char** argv) { return spooky::run_cli(argc, argv, std::cout, std::cerr); }
