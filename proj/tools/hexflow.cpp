#include <iostream>

#include "hexflow/cli.hpp"

int main(int argc, char** argv) { return hexflow::cli::run(argc, argv, std::cout, std::cerr); }
