#include <iostream>

#include "ooc/cli.hpp"

int main(int argc, char** argv) { return ooc::run_cli(argc, argv, std::cout, std::cerr); }
