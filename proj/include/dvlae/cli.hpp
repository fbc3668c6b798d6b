#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dvlae::cli {

enum ExitCode : int { kSuccess = 0, kUserError = 1, kInternalError = 2 };

/// Entry point behind the `dvlae` executable. `args` excludes argv[0].
/// Failures print one JSON line ({"error": ..., "exit_code": ...}) to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads an id list: one id per line, lines whose first non-blank character
/// is `#` are comments.
std::vector<std::string> read_id_list(const std::filesystem::path& path);
std::string write_id_list(const std::vector<std::string>& ids);

}  // namespace dvlae::cli
