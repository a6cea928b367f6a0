#include <iostream>

#include "ltscm/cli.hpp"

int main(int argc, char** argv) { return ltscm::cli::run(argc, argv, std::cout, std::cerr); }
