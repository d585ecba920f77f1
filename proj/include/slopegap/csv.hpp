#pragma once

#include <cstdio>
#include <string>

namespace slopegap::csv {

// Round-trip-safe float formatting for CSV output (17 significant digits).
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace slopegap::csv
