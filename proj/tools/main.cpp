#include "cli.hpp"

int main(int argc, char** argv) { return copdyn::cli::main(argc, argv); }
