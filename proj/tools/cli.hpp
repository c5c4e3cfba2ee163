#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Runs one command line. argv[0] is the program name. "-" as a path means
/// `in` for inputs and `out` for outputs.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace vnorm::cli
