#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnlab::cli {

// Exit codes: 0 success, 1 computational error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bnlab::cli
