#include "bie2d/cli.hpp"

int main(int argc, char** argv) { return bie2d::cli::run_main(argc, argv); }
