#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chancesplit::cli {

enum ExitCode : int {
    kPass = 0,
    kFail = 1,
    kParseError = 2,
    kUnsupported = 3,
    kInconclusive = 4,
};

/// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chancesplit::cli
