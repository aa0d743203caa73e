#pragma once

#include <string>
#include <vector>

namespace fflab {

/// Runs one CLI invocation. args excludes the program name.
/// Exit codes: 0 = success and all checks pass, 1 = a check failed,
/// 2 = usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace fflab
