#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return glmtest::run(argc, argv, std::cout, std::cerr); }
