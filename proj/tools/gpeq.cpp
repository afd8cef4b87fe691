#include "gpeq/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gpeq::cli::run(argc, argv, std::cout, std::cerr); }
