#pragma once

#include <string>
#include <vector>

namespace reebsim {

// Full CLI entry point; argv-style arguments without the program name.
// Returns the process exit status. Failures print a one-line JSON error to
// stderr and return nonzero.
int run_cli(const std::vector<std::string>& args);

} // namespace reebsim
