#include "hardylab/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hardylab::cli_main(argc, argv, std::cout, std::cerr);
}
