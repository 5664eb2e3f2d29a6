#pragma once

#include <cstdio>
#include <string>

namespace repct {

/// Shortest form that round-trips a double (17 significant digits).
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace repct
