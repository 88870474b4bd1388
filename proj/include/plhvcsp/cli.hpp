#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plhvcsp {

// Exit codes of run_command.
inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitError = 2;

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plhvcsp
