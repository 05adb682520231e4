#pragma once

#include <string>
#include <vector>

namespace ilab::cli {

// Parses and executes one command line (argv[0] excluded).
// Exit codes: 0 success, 1 usage error, 2 data error.
int run_args(std::vector<std::string> args);

int run(int argc, char** argv);

}  // namespace ilab::cli
