#pragma once

#include <cstdio>
#include <string>

namespace dqi {

/// Round-trip decimal form of a double (17 significant digits).
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace dqi
