// SPDX-License-Identifier: Apache-2.0
#include "cryomux/tdma/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cryomux/error.hpp"

namespace cryomux::tdma {

GateWaveform GateWaveform::ramp(double v_start, double v_end, double t_start, double t_end,
                                bool repeat) {
    if (!(t_end > t_start)) {
        throw Error(ErrorCode::InvalidArgument, "ramp needs t_end > t_start");
    }
    return GateWaveform(Ramp{v_start, v_end, t_start, t_end, repeat});
}

double GateWaveform::value_at(double t) const {
    if (const auto* s = std::get_if<Static>(&kind_)) {
        return s->volts;
    }
    const auto& r = std::get<Ramp>(kind_);
    if (t <= r.t_start) {
        return r.v_start;
    }
    const double period = r.t_end - r.t_start;
    double elapsed = t - r.t_start;
    if (r.repeat) {
        elapsed = std::fmod(elapsed, period);
    } else if (elapsed >= period) {
        return r.v_end;
    }
    return r.v_start + (r.v_end - r.v_start) * (elapsed / period);
}

TdmaSchedule::TdmaSchedule(std::vector<ScheduleEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "schedule has no entries");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!(e.t_end > e.t_start)) {
            std::ostringstream os;
            os << "schedule entry " << i << " has t_end <= t_start";
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
        if (i > 0 && e.t_start < entries_[i - 1].t_end) {
            std::ostringstream os;
            os << "schedule entry " << i << " overlaps or precedes entry " << i - 1;
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
    }
}

const ScheduleEntry* TdmaSchedule::entry_at(double t) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), t,
                               [](double v, const ScheduleEntry& e) { return v < e.t_start; });
    if (it == entries_.begin()) {
        return nullptr;
    }
    --it;
    return t < it->t_end ? &*it : nullptr;
}

std::vector<std::pair<double, double>> TdmaSchedule::gaps() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].t_start > entries_[i - 1].t_end) {
            out.emplace_back(entries_[i - 1].t_end, entries_[i].t_start);
        }
    }
    return out;
}

}  // namespace cryomux::tdma
