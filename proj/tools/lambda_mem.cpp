#include <iostream>
#include <string>
#include <vector>

#include "lambda_memory/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return lambda_memory::cli::run(args, std::cout, std::cerr);
}
