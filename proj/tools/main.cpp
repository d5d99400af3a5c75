#include <iostream>

#include "isolight/cli.hpp"

int main(int argc, char** argv) { return isolight::cli::run(argc, argv, std::cout, std::cerr); }
