#include <leo/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
    return leo::cli::run_cli({argv, argv + argc}, std::cout, std::cerr);
}
