#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return fstspmd::dispatch(argc, argv, std::cout, std::cerr); }
