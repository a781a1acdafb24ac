#include <iostream>

#include "ungar/cli.hpp"

int main(int argc, char** argv) { return ungar::cli::run(argc, argv, std::cout, std::cerr); }
