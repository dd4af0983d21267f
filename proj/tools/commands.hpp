#pragma once

#include <ostream>

namespace curvedborn::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kConfigFailure = 2,
  kNumericalFailure = 3,
};

/// Entry point of the `curvedborn` tool; summaries go to `out`, errors to `err`
/// as a JSON object {"error": kind, "message": text}.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvedborn::cli
