#include <iostream>
#include <string>
#include <vector>

#include "pvstab/cli.hpp"

int main(int argc, char** argv) {
    return pvstab::cli::main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
