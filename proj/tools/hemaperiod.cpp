#include <iostream>

#include "hema/cli.hpp"

int main(int argc, char** argv) {
    return hema::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
