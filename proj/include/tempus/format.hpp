#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "tempus/errors.hpp"

namespace tempus {

/// Shortest decimal string that parses back to exactly the same double
/// (std::to_chars without a precision argument guarantees round-tripping).
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

/// One CSV line from already-formatted cells; no quoting needed because all
/// emitted cells are numbers, short identifiers, or empty.
inline std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

/// Writes UTF-8 text with LF endings exactly as given.
inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::ConfigError, "cannot open output file: " + path);
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorKind::ConfigError, "write failed: " + path);
    }
}

} // namespace tempus
