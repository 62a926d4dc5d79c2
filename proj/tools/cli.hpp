#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrsca::cli {

/// Exit statuses shared by every subcommand.
enum Exit : int {
  kOk = 0,
  kNegative = 1,
  kInvalidInput = 2,
  kGenerationFailed = 3,
  kCapExceeded = 4,
};

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrsca::cli
