#include <iostream>

#include "fbfade/cli.hpp"

int main(int argc, char** argv) { return fbfade::cli::run(argc, argv, std::cout, std::cerr); }
