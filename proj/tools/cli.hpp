#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace trajattack::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one command line (without the program name). Returns the exit code:
/// 0 on success, 1 on runtime errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Names of output files in `a` whose contents differ from the same file in
/// `b`, ignoring wall-clock fields (wall_time_s columns and keys) and the
/// run manifest.
std::vector<std::string> differing_outputs(const std::filesystem::path& a,
                                           const std::filesystem::path& b);

}  // namespace trajattack::cli
