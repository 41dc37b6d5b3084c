#include <iostream>

#include "warpsol/cli.hpp"

int main(int argc, char** argv) { return warpsol::dispatch(argc, argv, std::cout, std::cerr); }
