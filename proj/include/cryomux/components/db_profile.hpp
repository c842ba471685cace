// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <vector>

namespace cryomux::components {

/// A value in dB that is either frequency-flat or a measured table. Tables are
/// linearly interpolated and held constant beyond their end points.
class DbProfile {
public:
    DbProfile(double flat_db = 0.0) : flat_db_(flat_db) {}  // NOLINT(implicit)
    DbProfile(std::vector<double> freqs_hz, std::vector<double> values_db);

    /// Measured-profile CSV with columns frequency_hz, value_db.
    static DbProfile from_csv(const std::filesystem::path& path);

    [[nodiscard]] double at(double f_hz) const;
    [[nodiscard]] bool is_flat() const noexcept { return freqs_.empty(); }
    [[nodiscard]] double flat_value() const noexcept { return flat_db_; }
    [[nodiscard]] const std::vector<double>& frequencies() const noexcept { return freqs_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double min_value() const;
    [[nodiscard]] double max_value() const;

    friend bool operator==(const DbProfile&, const DbProfile&) = default;

private:
    double flat_db_ = 0.0;
    std::vector<double> freqs_;
    std::vector<double> values_;
};

}  // namespace cryomux::components
