#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace caravan::cli {

// Runs one CLI invocation. Exit codes: 0 success, 1 domain-negative result,
// 2 usage or parse failure, 3 algorithmic abort.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caravan::cli
