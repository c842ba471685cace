// SPDX-License-Identifier: Apache-2.0
#include "cryomux/components/db_profile.hpp"

#include <algorithm>

#include "cryomux/error.hpp"
#include "cryomux/io/csv.hpp"

namespace cryomux::components {

DbProfile::DbProfile(std::vector<double> freqs_hz, std::vector<double> values_db)
    : freqs_(std::move(freqs_hz)), values_(std::move(values_db)) {
    if (freqs_.size() != values_.size() || freqs_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "profile needs matching, non-empty columns");
    }
    for (std::size_t i = 1; i < freqs_.size(); ++i) {
        if (!(freqs_[i] > freqs_[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "profile frequencies must be strictly increasing");
        }
    }
    flat_db_ = values_.front();
}

DbProfile DbProfile::from_csv(const std::filesystem::path& path) {
    const auto table = io::read_csv(path);
    return DbProfile(table.column_values(table.column("frequency_hz")),
                     table.column_values(table.column("value_db")));
}

double DbProfile::at(double f_hz) const {
    if (freqs_.empty()) {
        return flat_db_;
    }
    if (f_hz <= freqs_.front()) {
        return values_.front();
    }
    if (f_hz >= freqs_.back()) {
        return values_.back();
    }
    auto it = std::upper_bound(freqs_.begin(), freqs_.end(), f_hz);
    const auto hi = static_cast<std::size_t>(it - freqs_.begin());
    const auto lo = hi - 1;
    const double w = (f_hz - freqs_[lo]) / (freqs_[hi] - freqs_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

double DbProfile::min_value() const {
    return freqs_.empty() ? flat_db_ : *std::min_element(values_.begin(), values_.end());
}

double DbProfile::max_value() const {
    return freqs_.empty() ? flat_db_ : *std::max_element(values_.begin(), values_.end());
}

}  // namespace cryomux::components
