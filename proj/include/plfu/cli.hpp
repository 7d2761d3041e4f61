#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plfu::cli {

/// Entry point shared by the plfu-sim executable and the CLI tests.
/// Returns the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plfu::cli
