#include <iostream>

#include "dyncon/cli.hpp"

int main(int argc, char** argv) { return dyncon::run_cli(argc, argv, std::cout, std::cerr); }
