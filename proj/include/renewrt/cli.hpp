#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace renewrt::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kAcceptance = 3,
};

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace renewrt::cli
