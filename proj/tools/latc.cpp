#include <iostream>

#include "latc_cli.hpp"

int main(int argc, char** argv) { return latc::cli::main_entry(argc, argv, std::cout, std::cerr); }
