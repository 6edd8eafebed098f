#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ivlab {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitCapability = 3,
};

// Runs the command line; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ivlab
