#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace trekcalc {

// Runs one subcommand; args exclude the program name.  Returns the process
// exit code: 0 success, 1 condition-unmet/verification-failed, 2 usage or
// parse errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trekcalc
