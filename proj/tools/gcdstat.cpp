#include <iostream>

#include "gcdstat/cli.hpp"

int main(int argc, char** argv) { return gcdstat::cli::run(argc, argv, std::cout, std::cerr); }
