#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unitext::cli {

enum ExitStatus : int { kOk = 0, kUsage = 1, kInvalidInput = 2, kInternal = 3 };

/// Runs one subcommand (convert, split, fewshot, evaluate, simulate, inspect,
/// replay). `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unitext::cli
