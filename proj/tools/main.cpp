#include <iostream>

#include "cxorder/cli.hpp"

int main(int argc, char** argv) { return cxorder::cli::run(argc, argv, std::cout, std::cerr); }
