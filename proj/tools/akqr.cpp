#include "akqr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return akqr::run(argc, argv, std::cout, std::cerr); }
