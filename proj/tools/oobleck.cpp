#include <iostream>

#include "oobleck/cli.hpp"

int main(int argc, char** argv) { return oobleck::run_cli(argc, argv, std::cout, std::cerr); }
