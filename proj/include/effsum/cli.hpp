#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace effsum {

// Exit codes: 0 success, 1 theorem/oracle inconsistency or failed replay, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace effsum
