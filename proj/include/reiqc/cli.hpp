#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reiqc::cli {

/// Exit statuses of the `reiqc` binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  ///< paper-check with a failing criterion
inline constexpr int kExitValidation = 2;
inline constexpr int kExitPhysics = 3;

/// Runs one invocation (`args` excludes the program name) and returns its exit
/// status. Reports go to files under the output directory; a short summary
/// goes to `out` and structured error JSON to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace reiqc::cli
