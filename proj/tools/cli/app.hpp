#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modred::cli {

/// Entry point shared by the executable and the tests. Output goes to `out`
/// unless --out names a file; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modred::cli
