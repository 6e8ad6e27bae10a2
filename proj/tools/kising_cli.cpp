#include <iostream>

#include "kising/cli.hpp"

int main(int argc, char** argv) { return kising::cli::run_cli(argc, argv, std::cout, std::cerr); }
