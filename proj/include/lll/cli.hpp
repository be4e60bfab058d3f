#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lll::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kCertificateFailure = 2,
  kNoConvergence = 3,
};

/// Parses argv (argv[0] is the program name) and runs one subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lll::cli
