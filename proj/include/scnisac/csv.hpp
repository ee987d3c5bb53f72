// SPDX-License-Identifier: Apache-2.0
//
// RFC-4180 CSV with locale-independent shortest round-trip numbers.

#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace scn {

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string format_number(long long v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string format_number(int v) { return format_number(static_cast<long long>(v)); }

inline std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    /// `# key=value` line; only valid before the header.
    void comment(std::string_view text) { out_ << "# " << text << "\r\n"; }

    void header(const std::vector<std::string>& names) {
        columns_ = names.size();
        write(names);
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) throw std::logic_error("CsvWriter: row width does not match header");
        write(fields);
    }

private:
    void write(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_escape(fields[i]);
        }
        out_ << "\r\n";
    }

    std::ostream& out_;
    std::size_t columns_ = 0;
};

/// Field helpers: empty string for an absent value.
inline std::string cell(double v) { return format_number(v); }
inline std::string cell(long long v) { return format_number(v); }
inline std::string cell(int v) { return format_number(v); }
inline std::string cell(bool v) { return v ? "true" : "false"; }
inline std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace scn
