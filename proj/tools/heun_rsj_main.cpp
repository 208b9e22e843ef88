#include <iostream>
#include <string>
#include <vector>

#include "heun_rsj/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return heun_rsj::cli::run(args, std::cout, std::cerr);
}
