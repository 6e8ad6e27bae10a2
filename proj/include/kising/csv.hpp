#pragma once

// Minimal CSV emission: LF line endings, '.' decimal point, 17 significant
// digits so every double reparses to the same bits.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kising::csv {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || (errno == ERANGE && std::isinf(v))) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

inline void append_header(std::string& out, std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (auto c : columns) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
}

inline void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_double(v);
        first = false;
    }
    out += '\n';
}

}  // namespace kising::csv
