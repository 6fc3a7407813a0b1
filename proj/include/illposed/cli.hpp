#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace illposed {

/// Runs the command line `illposed solve|sweep [flags]`; args excludes the program name.
/// Returns the process exit code: 0 pass, 1 configuration or I/O error, 2 verdict failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace illposed
