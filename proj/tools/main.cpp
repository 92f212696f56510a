#include <iostream>
#include <string>
#include <vector>

#include "decentral/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return decentral::cli::main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
