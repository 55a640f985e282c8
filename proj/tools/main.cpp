#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return bernpairs::cli::run(argc, argv, std::cout, std::cerr); }
