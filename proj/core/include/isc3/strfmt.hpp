#pragma once

#include <charconv>
#include <string>

namespace isc3 {

// Shortest round-trip decimal form of a double. Used anywhere numeric text
// must be byte-reproducible (CSV, SVG, report details).
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace isc3
