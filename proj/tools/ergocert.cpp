#include <iostream>

#include "ergocert/app/cli.hpp"

int main(int argc, char** argv) {
    return ergocert::app::run(argc, argv, std::cout, std::cerr);
}
