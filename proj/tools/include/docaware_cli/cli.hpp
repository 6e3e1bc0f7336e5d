#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace docaware::cli {

/// Runs the `docaware` command line. `args` excludes the program name.
/// Returns the process exit code: 0 iff the command finished without error.
/// Warnings go to `err` as a per-category summary.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace docaware::cli
