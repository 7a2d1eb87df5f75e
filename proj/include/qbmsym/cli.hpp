#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace qbmsym {

/// Command-line front end. Subcommands: analyze | solve | equations | verify.
/// Exit codes: 0 success, 1 internal error, 2 input error, 3 verification
/// failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbmsym
