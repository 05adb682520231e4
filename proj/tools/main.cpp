#include "cli_commands.hpp"

int main(int argc, char** argv) { return ilab::cli::run(argc, argv); }
