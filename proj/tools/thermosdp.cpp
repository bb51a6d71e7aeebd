#include <iostream>

#include "thermosdp/commands.hpp"

int main(int argc, char** argv) { return thermosdp::run_cli(argc, argv, std::cout, std::cerr); }
