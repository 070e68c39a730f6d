#include <iostream>

#include "kqb/app/cli.hpp"

int main(int argc, char** argv) { return kqb::app::run_cli(argc, argv, std::cout, std::cerr); }
