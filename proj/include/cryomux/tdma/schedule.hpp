// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "cryomux/tdma/spi.hpp"

namespace cryomux::tdma {

class GateWaveform {
public:
    struct Static {
        double volts;
        friend bool operator==(const Static&, const Static&) = default;
    };
    /// Linear sweep from v_start at t_start to v_end at t_end. A repeating ramp
    /// restarts every (t_end - t_start); a single ramp holds v_end afterwards.
    /// Before t_start the ramp holds v_start.
    struct Ramp {
        double v_start;
        double v_end;
        double t_start;
        double t_end;
        bool repeat;
        friend bool operator==(const Ramp&, const Ramp&) = default;
    };

    static GateWaveform constant(double volts) { return GateWaveform(Static{volts}); }
    /// Throws InvalidArgument unless t_end > t_start.
    static GateWaveform ramp(double v_start, double v_end, double t_start, double t_end,
                             bool repeat = false);

    [[nodiscard]] double value_at(double t) const;
    [[nodiscard]] bool is_static() const noexcept { return std::holds_alternative<Static>(kind_); }
    [[nodiscard]] const std::variant<Static, Ramp>& kind() const noexcept { return kind_; }

    friend bool operator==(const GateWaveform&, const GateWaveform&) = default;

private:
    explicit GateWaveform(std::variant<Static, Ramp> k) : kind_(k) {}
    std::variant<Static, Ramp> kind_;
};

/// One schedule window. `gates[i]` drives the gate of SEB i; SEBs without an
/// entry sit at their idle voltage.
struct ScheduleEntry {
    double t_start = 0.0;
    double t_end = 0.0;
    MuxState mux;
    std::vector<std::optional<GateWaveform>> gates;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

class TdmaSchedule {
public:
    /// Entries must be sorted, non-overlapping, each with t_end > t_start.
    explicit TdmaSchedule(std::vector<ScheduleEntry> entries);

    [[nodiscard]] const std::vector<ScheduleEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] double start_time() const { return entries_.front().t_start; }
    [[nodiscard]] double end_time() const { return entries_.back().t_end; }

    /// Entry active at time t (half-open windows), or nullptr in a gap.
    [[nodiscard]] const ScheduleEntry* entry_at(double t) const;

    /// Gaps between consecutive entries as (t_start, t_end) pairs.
    [[nodiscard]] std::vector<std::pair<double, double>> gaps() const;

    friend bool operator==(const TdmaSchedule&, const TdmaSchedule&) = default;

private:
    std::vector<ScheduleEntry> entries_;
};

}  // namespace cryomux::tdma
