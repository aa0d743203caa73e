#include <string>
#include <vector>

#include "fflab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fflab::run_cli(args);
}
