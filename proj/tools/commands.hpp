#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace airsig::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2 };

/// Runs one command line (without the program name), e.g.
/// {"synth", "--users", "5", "--out", "data"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace airsig::cli
