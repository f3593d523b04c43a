#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    const char* env = std::getenv("FOCUSE_COLOR");
    bool color = isatty(STDOUT_FILENO) && !(env && std::strcmp(env, "0") == 0);
    std::vector<std::string> args(argv + 1, argv + argc);
    return focuse::cli::run(args, std::cout, std::cerr, color);
}
