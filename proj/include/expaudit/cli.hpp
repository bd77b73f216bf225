#pragma once

#include <string>
#include <vector>

namespace ea::cli {

// Exit codes: 0 pass, 1 violations, 2 config error, 3 numerical failure.
int run(const std::vector<std::string>& args);

}  // namespace ea::cli
