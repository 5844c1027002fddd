#pragma once

#include <Eigen/Core>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "sdr/error.hpp"
#include "sdr/types.hpp"

namespace sdr {

struct CsvTable {
    std::vector<std::string> names;  // empty when the file had no header
    Matrix values;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline double parse_cell(std::string_view cell, std::size_t line, std::size_t column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("non-numeric cell '" + std::string(cell) + "' at line " +
                             std::to_string(line) + ", column " + std::to_string(column),
                         line, column);
    return v;
}

/// Shortest decimal digits that round-trip the double exactly.
inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    std::from_chars(buf, buf + std::string_view(buf).size(), back);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[32];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
            double b2 = 0.0;
            std::from_chars(shorter, shorter + std::string_view(shorter).size(), b2);
            if (b2 == v) return shorter;
        }
    }
    return buf;
}

}  // namespace detail

/// Rectangular numeric CSV -> matrix. Parse failures name the 1-based line
/// (and column) of the offending cell; ragged rows are rejected.
inline CsvTable load_matrix_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        if (sv.empty()) continue;
        auto fields = detail::split_fields(sv);
        if (has_header && table.names.empty() && rows.empty()) {
            for (auto f : fields) table.names.emplace_back(f);
            width = fields.size();
            continue;
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw ParseError("ragged row at line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(width) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        std::vector<double> row;
        row.reserve(width);
        for (std::size_t c = 0; c < fields.size(); ++c)
            row.push_back(detail::parse_cell(fields[c], line_no, c + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("no data rows in " + path);

    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j)
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return table;
}

/// Writes a matrix with round-trip decimal formatting, optional header row.
inline void save_matrix_csv(const std::string& path, const Matrix& m,
                            const std::vector<std::string>& names = {}) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path);
    if (!names.empty()) {
        if (static_cast<Eigen::Index>(names.size()) != m.cols())
            throw DimensionError("header width mismatch");
        for (std::size_t j = 0; j < names.size(); ++j) {
            if (j) out << ',';
            out << names[j];
        }
        out << '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << detail::format_full(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace sdr
