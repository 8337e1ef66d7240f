#include "tricomp/cli.hpp"

int main(int argc, char** argv) { return tricomp::cli::run(argc, argv); }
