#include <iostream>

#include "reslab_cli/cli.hpp"

int main(int argc, char** argv) { return reslab::cli::run(argc, argv, std::cout, std::cerr); }
