#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frechet::cli {

/// Runs the CLI with the given arguments (excluding the program name).
/// Returns the process exit code: 0 on success, 1 on domain errors
/// (infeasible class, concavity violations, failed verification), 2 on
/// malformed input. Nothing is written to `out` unless the exit code is 0.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

} // namespace frechet::cli
