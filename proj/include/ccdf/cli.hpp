#ifndef CCDF_CLI_HPP
#define CCDF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ccdf::cli {

/// Runs one command. `args` excludes the program name. Artifacts go to the
/// path given by --output, or to `out` when it is absent or "-".
/// Returns the process exit status (0 on success).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccdf::cli

#endif  // CCDF_CLI_HPP
