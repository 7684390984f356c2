#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace strata {

// Runs the command-line front end. args excludes the program name.
// Exit status: 0 success, 1 usage error, 2 data/validation error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace strata
