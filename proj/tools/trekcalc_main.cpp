#include <iostream>
#include <string>
#include <vector>

#include "trekcalc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return trekcalc::dispatch(args, std::cout, std::cerr);
}
