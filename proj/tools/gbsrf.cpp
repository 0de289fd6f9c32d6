#include <iostream>

#include "gbsrf/cli.hpp"

int main(int argc, char** argv) { return gbsrf::cli::run(argc, argv, std::cout, std::cerr); }
