#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minisa::cli {

enum class Command { Analyze, Tidy };

/// Runs one tool invocation. Returns the process exit code:
/// 0 clean or verify pass, 1 findings or verify failure, 2 usage/parse/I/O error.
int run(Command cmd, std::vector<std::string> args, std::ostream &out, std::ostream &err);

} // namespace minisa::cli
