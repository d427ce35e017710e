#include <iostream>

#include "mcd/cli.hpp"

int main(int argc, char** argv) { return mcd::run_cli(argc, argv, std::cout, std::cerr); }
