#include <iostream>
#include <string>
#include <vector>

#include "tsembed/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tsembed::cli::run(args, std::cout, std::cerr);
}
