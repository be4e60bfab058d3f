#include <iostream>

#include "lll/cli.hpp"

int main(int argc, char** argv) { return lll::cli::run(argc, argv, std::cout, std::cerr); }
