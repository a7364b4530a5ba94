#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csam::cli {

enum ExitCode {
  kOk = 0,
  kUsageOrParse = 1,
  kUnsafeOrInvalid = 2,
  kAssumptionViolated = 3,
};

/// Runs `csam <subcommand> ...`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csam::cli
