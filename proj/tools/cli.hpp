#pragma once

#include <string>
#include <vector>

namespace snowforge::cli {

enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,
    kDataError = 2,
};

/// Entry point of the `snowforge` binary. args[0] is the program name.
int run(const std::vector<std::string>& args);

}  // namespace snowforge::cli
