#include <iostream>

#include "shellconv/cli.hpp"

int main(int argc, char** argv) { return shellconv::cli::run(argc, argv, std::cout, std::cerr); }
