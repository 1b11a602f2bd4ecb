#pragma once

#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "somqe/error.hpp"

namespace somqe::csv {

inline std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::vector<std::vector<std::string>> parse(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!line.empty()) rows.push_back(split_line(line));
            start = i + 1;
        }
    }
    return rows;
}

inline double to_number(const std::string& cell, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') throw io_error(where + ": not a number: \"" + cell + "\"");
    return v;
}

/// Data columns of a group CSV (header row, one column per group).
/// Shorter columns are allowed: blank cells at the bottom are skipped.
inline std::vector<std::vector<double>> read_groups(std::string_view text, const std::string& where) {
    const auto rows = parse(text);
    if (rows.size() < 2) throw io_error(where + ": expected a header row plus data rows");
    const std::size_t n_cols = rows[0].size();
    std::vector<std::vector<double>> groups(n_cols);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() > n_cols) throw io_error(where + ": row " + std::to_string(r + 1) + " has extra cells");
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (rows[r][c].empty()) continue;
            groups[c].push_back(to_number(rows[r][c], where + " row " + std::to_string(r + 1)));
        }
    }
    return groups;
}

/// QE column of a series report CSV (index,image,qe).
inline std::vector<double> read_qe_column(std::string_view text, const std::string& where) {
    const auto rows = parse(text);
    if (rows.size() < 2 || rows[0].size() != 3 || rows[0][0] != "index" || rows[0][1] != "image" || rows[0][2] != "qe")
        throw io_error(where + ": expected a series report with header index,image,qe");
    std::vector<double> qe;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 3) throw io_error(where + ": row " + std::to_string(r + 1) + " is not index,image,qe");
        qe.push_back(to_number(rows[r][2], where + " row " + std::to_string(r + 1)));
    }
    return qe;
}

}  // namespace somqe::csv
