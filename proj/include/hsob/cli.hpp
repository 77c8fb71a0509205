#pragma once

#include <string>
#include <vector>

namespace hsob::cli {

/// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or I/O error.
enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace hsob::cli
