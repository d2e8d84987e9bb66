#include <iostream>

#include "repvote/cli.hpp"

int main(int argc, char** argv) { return repvote::run_cli(argc, argv, std::cout, std::cerr); }
