#include <iostream>

#include "pfscale/cli.hpp"

int main(int argc, char** argv) { return pfscale::cli_main(argc, argv, std::cout, std::cerr); }
