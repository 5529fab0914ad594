#include "tropls/io.hpp"

#include <iostream>

int main(int argc, char** argv) { return tropls::io::run_cli(argc, argv, std::cout, std::cerr); }
