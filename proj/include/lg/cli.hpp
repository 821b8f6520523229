#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lg {

enum ExitCode : int {
  kExitConvex = 0,
  kExitNotConvex = 1,
  kExitInconclusive = 2,
  kExitInputError = 3,
  kExitDisconnected = 4,
  kExitOracleDisagreement = 5,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lg
