#include <iostream>

#include "shiftkl/cli.hpp"

int main(int argc, char** argv) { return shiftkl::cli::run_cli(argc, argv, std::cout, std::cerr); }
