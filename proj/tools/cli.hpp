#pragma once

#include <string>
#include <vector>

namespace bvn::cli {

// Runs one command; returns the process exit code (0 true/success, 1 false,
// 2 usage error, 3 internal invariant failure). Output goes to `out`/`err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bvn::cli
