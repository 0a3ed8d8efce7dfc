#ifndef ROAI_IO_HPP
#define ROAI_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "roai/instance.hpp"

/**
 * @file io.hpp
 *
 * @brief CSV emission and means-file ingestion.
 *
 * Output files are written to a temporary sibling and renamed into place,
 * so partial results never clobber earlier ones.  Numeric cells use the
 * shortest decimal form that round-trips to the same double.
 */

namespace roai {

/// Shortest decimal representation that parses back to exactly `value`.
inline std::string format_double(double value) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

/// One flat CSV record; keys are column names.
struct OutputRow {
    std::map<std::string, std::string> cells;

    OutputRow& set(const std::string& key, const std::string& value) {
        cells[key] = value;
        return *this;
    }
    OutputRow& set(const std::string& key, double value) {
        return set(key, format_double(value));
    }
    OutputRow& set(const std::string& key, std::int64_t value) {
        return set(key, std::to_string(value));
    }
    OutputRow& set(const std::string& key, int value) {
        return set(key, std::to_string(value));
    }
    OutputRow& set(const std::string& key, std::uint64_t value) {
        return set(key, std::to_string(value));
    }
};

/// Writes `content` to `path` via a temporary file and an atomic rename,
/// creating parent directories as needed.
inline void write_file_atomically(const std::string& path, const std::string& content) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::filesystem::create_directories(parent);
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + tmp);
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

/**
 * Renders rows as CSV with the given column set, alphabetically ordered.
 * Every row must carry exactly the given columns.
 */
inline std::string render_csv(std::vector<std::string> columns,
                              const std::vector<OutputRow>& rows) {
    std::sort(columns.begin(), columns.end());
    for (const std::string& c : columns) {
        if (c.find(',') != std::string::npos || c.find('\n') != std::string::npos) {
            throw std::invalid_argument("render_csv: column name contains a delimiter: " + c);
        }
    }
    std::ostringstream out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        out << (j ? "," : "") << columns[j];
    }
    out << '\n';
    for (const OutputRow& row : rows) {
        if (row.cells.size() != columns.size()) {
            throw std::invalid_argument("render_csv: row does not match the column set");
        }
        for (std::size_t j = 0; j < columns.size(); ++j) {
            auto it = row.cells.find(columns[j]);
            if (it == row.cells.end()) {
                throw std::invalid_argument("render_csv: row is missing column " + columns[j]);
            }
            if (it->second.find(',') != std::string::npos ||
                it->second.find('\n') != std::string::npos) {
                throw std::invalid_argument("render_csv: cell contains a delimiter");
            }
            out << (j ? "," : "") << it->second;
        }
        out << '\n';
    }
    return out.str();
}

inline void emit_csv(const std::vector<std::string>& columns, const std::vector<OutputRow>& rows,
                     const std::string& path) {
    try {
        write_file_atomically(path, render_csv(columns, rows));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (while writing " + path + ")");
    }
}

/**
 * Reads one mean per line into a Bernoulli instance.
 *
 * Lines starting with '#' (after leading whitespace) and blank lines are
 * ignored; anything else must parse as a decimal in [0, 1].  Arm order is
 * file order.
 */
inline BanditInstance ingest_means(const std::string& path, double k = 2.0,
                                   double mad_scale = 1.0) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read means file: " + path);
    }
    BanditInstance instance;
    instance.reward_model = RewardModel::kBernoulli;
    instance.k = k;
    instance.mad_scale = mad_scale;

    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') {
            continue;
        }
        std::size_t end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(start, end - start + 1);

        char* parse_end = nullptr;
        const double value = std::strtod(token.c_str(), &parse_end);
        if (parse_end != token.c_str() + token.size() || !std::isfinite(value)) {
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": not a number: '" + token + "'");
        }
        if (value < 0.0 || value > 1.0) {
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": mean outside [0, 1] for a Bernoulli instance");
        }
        instance.means.push_back(value);
    }
    if (instance.means.empty()) {
        throw std::runtime_error("means file has no values: " + path);
    }
    instance.validate();
    return instance;
}

}  // namespace roai

#endif
