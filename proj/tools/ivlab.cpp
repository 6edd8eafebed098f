#include <iostream>
#include <string>
#include <vector>

#include "ivlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return ivlab::run_cli(args, std::cout, std::cerr);
}
