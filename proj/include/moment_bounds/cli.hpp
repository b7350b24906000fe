#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moment_bounds {

/// Command-line entry point. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 analysis error, 2 usage or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace moment_bounds
