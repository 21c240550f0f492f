#pragma once

// Numeric CSV tables written with 17 significant digits and read back by the
// same module.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec::cli {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ParameterError("no column named '" + name + "'", "column");
    }

    std::vector<double> values(const std::string& name) const {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

/// Round-trip decimal form of x: 17 significant digits, "nan" / "inf" / "-inf".
inline std::string format_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Shortest decimal that parses back to x, for column names.
inline std::string format_label(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

inline void write_csv(std::ostream& os, const CsvTable& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& r : t.rows) {
        if (r.size() != t.header.size()) throw GridMismatchError("row width differs from the header", "rows");
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_value(r[i]);
        os << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_cell(const std::string& s, std::size_t line_no) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParameterError("line " + std::to_string(line_no) + ": '" + s + "' is not a number", "csv");
    }
    return v;
}

}  // namespace detail

inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw ParameterError("empty CSV input", "csv");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = detail::split_fields(line);
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_fields(line);
        if (cells.size() != t.header.size()) {
            throw ParameterError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                     " fields, header has " + std::to_string(t.header.size()),
                                 "csv");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(detail::parse_cell(c, line_no));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open '" + path + "'", "csv");
    return read_csv(in);
}

}  // namespace fracspec::cli
