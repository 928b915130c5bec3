#pragma once

#include <iosfwd>

namespace marsupial::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDivergence = 2;

/// Entry point of the `marsupial` tool. Diagnostics go to `err`, reports
/// that are not redirected to a file go to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace marsupial::cli
