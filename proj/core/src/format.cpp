#include "marsupial/format.hpp"

#include <cstdio>

namespace marsupial {

std::string format_real(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace marsupial
