#include "dnl/cli.hpp"

int main(int argc, char** argv) { return dnl::cli::run(argc, argv); }
