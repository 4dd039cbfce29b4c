#include "cli.hpp"

int main(int argc, char** argv) { return exactwkb::cli::run(argc, argv); }
