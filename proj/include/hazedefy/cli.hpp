#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hazedefy::cli {

/// Runs the command line. `args` includes the program name. `in`/`out` back
/// the "-" paths; diagnostics go to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hazedefy::cli
