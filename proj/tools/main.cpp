// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "cryomux/cli/cli.hpp"

int main(int argc, char** argv) { return cryomux::cli::run(argc, argv, std::cout, std::cerr); }
