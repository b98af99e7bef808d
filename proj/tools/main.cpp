#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return goliath::cli::run(argc, argv, std::cout, std::cerr); }
