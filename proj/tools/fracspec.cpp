#include <iostream>

#include "fracspec/cli/app.hpp"

int main(int argc, char** argv) { return fracspec::cli::run_cli(argc, argv, std::cout, std::cerr); }
