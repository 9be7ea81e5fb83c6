#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entmeas::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNotConverged = 3;

/// Names accepted by `measure --measure`.
const std::vector<std::string>& measure_names();

/// Runs one command line (without the program name). Reports go to out,
/// diagnostics to err; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entmeas::cli
