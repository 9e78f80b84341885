#include <iostream>

#include "febe/cli/app.hpp"

int main(int argc, char** argv) { return febe::cli::run_app(argc, argv, std::cout, std::cerr); }
