#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "affect/error.hpp"

namespace affect::csv {

// Minimal RFC 4180 reader: comma separated, double-quote escaping, CRLF or LF.
struct Table {
    std::string source;  // file name used in error locations
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // data rows only
    std::vector<std::size_t> line_numbers;        // 1-based source line of each row

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ValidationError(source, "missing column '" + std::string(name) + "'");
    }
    bool has_column(std::string_view name) const {
        for (const auto& h : header)
            if (h == name) return true;
        return false;
    }
    std::string where(std::size_t row) const { return source + ":" + std::to_string(line_numbers.at(row)); }
};

inline Table parse(std::string_view text, std::string source = "<memory>") {
    Table t;
    t.source = std::move(source);
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool have_header = false;

    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) {
            if (!have_header) {
                t.header = std::move(record);
                have_header = true;
            } else {
                if (record.size() != t.header.size())
                    throw ValidationError(t.source + ":" + std::to_string(record_line),
                                          "expected " + std::to_string(t.header.size()) + " fields, got " +
                                              std::to_string(record.size()));
                t.rows.push_back(std::move(record));
                t.line_numbers.push_back(record_line);
            }
        }
        record.clear();
    };

    std::size_t i = 0;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty())
                    throw ValidationError(t.source + ":" + std::to_string(line), "stray quote inside field");
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                field_started = false;
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                ++line;
                record_line = line;
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) throw ValidationError(t.source + ":" + std::to_string(record_line), "unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    if (!have_header) throw ValidationError(t.source, "empty file, header expected");
    return t;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Table read(const std::string& path) { return parse(read_file(path), path); }

inline void require_header(const Table& t, std::initializer_list<std::string_view> cols) {
    for (auto c : cols) (void)t.column(c);
}

inline double to_double(std::string_view s, const std::string& where, std::string_view field) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    while (first != last && *first == ' ') ++first;
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw ValidationError(where, "field '" + std::string(field) + "' is not a number: '" + std::string(s) + "'");
    return v;
}

inline long long to_int(std::string_view s, const std::string& where, std::string_view field) {
    long long v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    while (first != last && *first == ' ') ++first;
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ValidationError(where,
                              "field '" + std::string(field) + "' is not an integer: '" + std::string(s) + "'");
    return v;
}

// Fixed-precision formatting with negative zero folded to zero, so output bytes do
// not depend on the sign of a rounding residue.
inline std::string number(double v, int precision = 6) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::string s = fmt::format("{:.{}f}", v, precision);
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

inline std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

class Writer {
public:
    explicit Writer(std::vector<std::string> header) : columns_(header.size()) { row(header); }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) throw Error("csv writer: row width mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_.push_back(',');
            out_ += escape(fields[i]);
        }
        out_.push_back('\n');
    }

    const std::string& str() const { return out_; }

private:
    std::size_t columns_;
    std::string out_;
};

}  // namespace affect::csv
