#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deception::cli {

inline constexpr const char* version = "0.3.1";

// Runs one command. Exit status: 0 success, 1 unexpected failure,
// 2 invalid input or usage, 3 size guard.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

std::string sha256_hex(const std::string& bytes);

} // namespace deception::cli
