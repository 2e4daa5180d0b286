#include <iostream>

#include "dilatlab/cli.hpp"

int main(int argc, char** argv) { return dilatlab::run_cli(argc, argv, std::cout, std::cerr); }
