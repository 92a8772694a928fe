#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace taskfsa {

// Exit codes of the command-line driver.
inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_backend = 3;

// Runs one command. args excludes the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Finds a transcript given a path, the path plus ".json", or a fixture name
// under a sibling transcripts/ directory.
[[nodiscard]] std::string resolve_transcript_path(const std::string& path);

} // namespace taskfsa
