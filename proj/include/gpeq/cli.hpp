#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

namespace gpeq::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kSingularGram = 3,
    kAtomMismatch = 4,
    kOptimizationFailed = 5,
};

/// Hex SHA-256 of the given bytes.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

/// Runs the command line `argv[0] <subcommand> [flags]`. Diagnostics go to
/// `err`, short progress/summary lines to `out`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gpeq::cli
