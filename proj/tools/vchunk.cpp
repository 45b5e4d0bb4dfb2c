#include <iostream>

#include "vchunk/cli.hpp"

int main(int argc, char** argv) { return vchunk::cli::run(argc, argv, std::cout, std::cerr); }
