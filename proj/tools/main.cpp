#include <iostream>

#include "mlab/cli_app.hpp"

int main(int argc, char** argv) { return mlab::cli::run(argc, argv, std::cout, std::cerr); }
