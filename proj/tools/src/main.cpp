#include "treemeasure/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return treemeasure::cli::run(argc, argv, std::cout, std::cerr); }
