#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nba::cli {

enum ExitCode { kOk = 0, kUsage = 1, kDomainError = 2, kDemoMismatch = 3 };

// args excludes the program name. `in` feeds the repl.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace nba::cli
