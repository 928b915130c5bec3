#include <iostream>

#include "marsupial_cli/cli.hpp"

int main(int argc, char** argv) { return marsupial::cli::run(argc, argv, std::cout, std::cerr); }
