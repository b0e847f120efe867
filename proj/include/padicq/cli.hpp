#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padicq::cli {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;         // computation failed or verification did not pass
inline constexpr int kInvalidConfig = 2;  // bad flag, config key or input file
inline constexpr int kSizeLimit = 3;      // grid exceeds the cell limit

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Flat `key = value` text; '#' starts a comment. Returns pairs in file order.
/// Throws Error(invalid_input) naming the line of a malformed entry.
std::vector<std::pair<std::string, std::string>> read_flat_config(std::istream& is);

}  // namespace padicq::cli
