#pragma once

#include <string>
#include <vector>

namespace trapdoc {

// Full CLI dispatch. Exit codes: 0 success, 1 usage, 2 malformed input,
// 3 LLM failure, 4 internal invariant violation.
int cli_main(const std::vector<std::string>& args);
int cli_main(int argc, const char* const* argv);

}  // namespace trapdoc
