#include "tom_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tom::cli::run(argc, argv, std::cout, std::cerr); }
