#include <iostream>

#include "mdpx/cli.hpp"

int main(int argc, char** argv) { return mdpx::run_cli(argc, argv, std::cout, std::cerr); }
