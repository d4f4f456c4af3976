#include <iostream>

#include "balload/cli.hpp"

int main(int argc, char** argv) { return balload::cli::run(argc, argv, std::cout, std::cerr); }
