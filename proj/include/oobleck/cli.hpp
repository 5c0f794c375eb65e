#pragma once

#include <iosfwd>

namespace oobleck {

/// Entry point of the `oobleck` command. Returns the process exit status:
/// 0 on success, 1 for usage errors, 2 for diagnostics (compile errors,
/// runtime failures, infeasible calibrations, unreadable files).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oobleck
