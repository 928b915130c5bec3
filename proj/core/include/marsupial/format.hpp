#pragma once

#include <string>

namespace marsupial {

/// Shortest-stable textual form used by every data file: 17 significant
/// digits, so values survive a text round trip bit for bit.
std::string format_real(double value);

}  // namespace marsupial
