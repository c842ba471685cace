// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cryomux::io {

/// Minimal CSV writer: one header line naming columns (with units), then rows
/// of numbers in shortest round-trip form.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) {
        row(std::span<const double>(values.begin(), values.size()));
    }

    [[nodiscard]] std::size_t columns() const noexcept { return columns_; }

private:
    std::ofstream out_;
    std::size_t columns_;
    std::filesystem::path path_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header column; throws ParseError when absent.
    [[nodiscard]] std::size_t column(const std::string& name) const;
    [[nodiscard]] std::vector<double> column_values(std::size_t index) const;
};

/// Reads a numeric CSV with a single header line. Blank lines and lines
/// starting with '#' are ignored.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace cryomux::io
