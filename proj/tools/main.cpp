#include "cli.hpp"

int main(int argc, char** argv) { return rrambb::cli::run_command(argc, argv); }
