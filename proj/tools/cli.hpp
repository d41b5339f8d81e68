#pragma once

#include <iosfwd>

namespace ampgdf::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kNumericalFailure = 3,
};

/// Entry point of the `ampgdf` command line tool. Normal output goes to
/// `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ampgdf::cli
