#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voxcell::cli {

/// Runs the command line. Returns 0 on success, 2 on usage errors and 1 on
/// runtime failures (with a JSON error object on err).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace voxcell::cli
