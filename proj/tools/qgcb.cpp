#include <iostream>

#include "qgcb/cli.hpp"

int main(int argc, char** argv) { return qgcb::cli::run(argc, argv, std::cout, std::cerr); }
