#include <iostream>

#include "thirdassay/cli.hpp"

int main(int argc, char** argv) { return thirdassay::cli::main_entry(argc, argv, std::cout, std::cerr); }
