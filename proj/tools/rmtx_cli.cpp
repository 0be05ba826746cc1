#include <iostream>

#include "rmtx/cli.hpp"

int main(int argc, char** argv) { return rmtx::cli::main_entry(argc, argv, std::cout, std::cerr); }
