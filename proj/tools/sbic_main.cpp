#include <iostream>

#include "sbic/cli.hpp"

int main(int argc, char** argv) { return sbic::run_cli(argc, argv, std::cout, std::cerr); }
