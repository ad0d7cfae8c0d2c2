#include "flowstack/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return flowstack::cli::run(argc, argv, std::cout, std::cerr);
}
