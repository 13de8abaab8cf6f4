#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaoscipher::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kIo = 3,
    kRefusedOverwrite = 4,
    kContainerFormat = 5,
    kSentinelMismatch = 6,
    kKeyParse = 7,
    kSpaceTooLarge = 8,
    kInsufficientEntropy = 9,
};

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaoscipher::cli
