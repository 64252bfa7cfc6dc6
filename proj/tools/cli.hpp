#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace segcs::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr unsigned long long kDefaultSeed = 20130501ULL;
inline constexpr const char* kOutDirEnv = "SEGCS_OUT_DIR";

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsage = 2 };

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace segcs::cli
