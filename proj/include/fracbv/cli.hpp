#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracbv {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 success, 1 a check or solve failed, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracbv
