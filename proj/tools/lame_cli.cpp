#include <iostream>

#include "lame/cli.hpp"

int main(int argc, char** argv) { return lame::cli::run(argc, argv, std::cout, std::cerr); }
