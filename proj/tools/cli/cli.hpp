#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deepregex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitInternal = 70;

/// Runs one `deepregex` invocation; args excludes the program name.
/// dfa-equal additionally exits 1 (not equal) or 2 (parse error), and
/// grad-check exits 1 when the tolerance is missed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deepregex::cli
