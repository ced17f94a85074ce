#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace paramsub::cli {

// Runs one command line (without the program name). Exit codes: 0 success or
// Yes, 1 No or refuted, 2 usage, input or internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paramsub::cli
