#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace repct {

/// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_property_failed = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_integration = 3;
inline constexpr int exit_strict_sweep = 4;

/// Entry point for the `repct` tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a flat key=value file. Blank lines and lines starting with '#' are
/// skipped. Throws invalid_config on malformed lines or a missing file.
std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path);

}  // namespace repct
