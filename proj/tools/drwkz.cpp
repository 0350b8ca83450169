#include <iostream>

#include "drwkz/cli.hpp"

int main(int argc, char** argv) { return drwkz::cli::run(argc, argv, std::cout, std::cerr); }
