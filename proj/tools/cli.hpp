#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace treeshift::cli {

/// Runs one command line (without the program name). Returns the exit status:
/// 0 ok, 2 usage, 3 parse error, 4 semantic error, 5 budget exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace treeshift::cli
