#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmpfem {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  ///< usage or I/O error
  kExitPicardDiverged = 2,
  kExitLinearDiverged = 3,
  kExitCertificateFailed = 4,
};

/// Runs `dmpfem <args...>` (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmpfem
