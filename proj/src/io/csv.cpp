// SPDX-License-Identifier: Apache-2.0
#include "cryomux/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "cryomux/error.hpp"
#include "cryomux/io/number_format.hpp"

namespace cryomux::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path), columns_(header.size()), path_(path) {
    if (!out_) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) {
        throw Error(ErrorCode::InvalidArgument, "CSV row width does not match header");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << format_double(values[i]);
    }
    out_ << '\n';
    if (!out_) {
        throw Error(ErrorCode::IoError, "write failed for " + path_.string());
    }
}

std::size_t CsvTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw Error(ErrorCode::ParseError, "CSV has no column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::column_values(std::size_t index) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(r.at(index));
    }
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        auto cells = split(t);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) +
                                                   ": expected " +
                                                   std::to_string(table.header.size()) + " cells");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (c.empty() || ec != std::errc() || ptr != c.data() + c.size()) {
                throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) +
                                                       ": bad number '" + c + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) {
        throw Error(ErrorCode::ParseError, path.string() + ": empty CSV");
    }
    return table;
}

}  // namespace cryomux::io
