#pragma once

#include <iosfwd>

namespace hexflow::cli
{

/** Stable process exit codes. */
enum ExitCode : int {
    kSuccess = 0,
    kInvalidInput = 2,
    kInadmissibleState = 3,
    kNotConverged = 4,
};

/**
 * Entry point of the `hexflow` tool:
 *
 *   hexflow check <mesh>
 *   hexflow curvature <mesh> --state <file>
 *   hexflow flow <mesh> --state <file> --target <file> --kind ricci|calabi|frac [--s x]
 *                [--tol e] [--max-steps n] [--trace out.csv] [--out state.json]
 *   hexflow solve <mesh> --target <file> [--state <file>] [--tol e] [--out state.json]
 *
 * Results go to `out`, diagnostics to `err`. Log verbosity comes from the
 * HEXFLOW_LOG environment variable (error, info, debug; default info).
 */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hexflow::cli
