#include "cli_main.hpp"

int main(int argc, char** argv) { return trapdoc::cli_main(argc, argv); }
