#include <string>
#include <vector>

#include "reebsim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return reebsim::run_cli(args);
}
