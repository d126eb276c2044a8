#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace enriched::cli {

// Runs one command line (without the program name). Returns the exit code:
// 0 success, 2 input error, 3 invalid incarnation, 4 hypothesis violated,
// 1 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace enriched::cli
