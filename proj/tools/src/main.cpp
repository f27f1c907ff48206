#include <iostream>

#include "mdpd_cli/cli.hpp"

int main(int argc, char** argv) { return mdpd::cli::main_entry(argc, argv, std::cout, std::cerr); }
