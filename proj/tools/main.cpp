#include <iostream>

#include "wp/cli.hpp"

int main(int argc, char** argv) { return wp::cli::run(argc, argv, std::cout, std::cerr); }
