#pragma once

#include <string>
#include <vector>

namespace trade::cli {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kManifest = "manifest.json";

/// Runs the command line `args` (without the program name) and returns the
/// process exit code: 0 success, 1 usage or validation error, 2 runtime failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace trade::cli
