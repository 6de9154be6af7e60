#include <iostream>
#include <string>
#include <vector>

#include "chancesplit/cli.hpp"

int main(int argc, char** argv) {
    return chancesplit::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
