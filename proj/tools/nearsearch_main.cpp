#include <iostream>

#include "nearsearch/cli.hpp"

int main(int argc, char** argv) {
    return nearsearch::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
