#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace favlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapExceeded = 3;

/// Runs one subcommand (gen | shadow | favard | buffon | spectral | verify |
/// scan). args excludes the program name. Reports go to `out` unless
/// --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace favlab::cli
