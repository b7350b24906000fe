#include "moment_bounds/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return moment_bounds::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
