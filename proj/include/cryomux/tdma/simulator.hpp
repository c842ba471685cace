// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cryomux/tdma/assembly.hpp"
#include "cryomux/tdma/schedule.hpp"

namespace cryomux::tdma {

/// Demodulated complex envelope of one tone, uniformly sampled from t0.
struct IqTrace {
    double tone_hz = 0.0;
    double sample_rate_hz = 0.0;
    double t0 = 0.0;
    std::vector<std::complex<double>> samples;

    [[nodiscard]] double time_at(std::size_t i) const {
        return t0 + static_cast<double>(i) / sample_rate_hz;
    }
    /// Index range [first, last) of samples with t in [t_start, t_end).
    [[nodiscard]] std::pair<std::size_t, std::size_t> index_range(double t_start, double t_end) const;
};

struct SimulationOptions {
    bool noise = true;
    std::uint64_t seed = 1;
    bool strict_gaps = false;  // throw ScheduleGap instead of filling with mux = none
};

struct SimulationResult {
    std::vector<IqTrace> traces;  // one per tone, in tone order
    std::vector<std::string> warnings;
};

/// Seed of tone `k`'s noise stream: splitmix64 of master + (k + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_tone_seed(std::uint64_t master, std::size_t tone_index);

/// Baseband simulation of every tone over the schedule's span. The chain is
/// evaluated once per output sample from the schedule state at that sample's
/// start time (atomic switching). Internally the envelope runs at the
/// oversampled rate, passes a single-pole low-pass at the demodulation
/// bandwidth and is averaged down to the output rate.
SimulationResult simulate(const TdmaSchedule& schedule, std::span<const double> tones_hz,
                          const Assembly& assembly, const SimulationOptions& options);

/// CSV with columns t_s, i_v, q_v.
void write_trace_csv(const std::filesystem::path& path, const IqTrace& trace);

}  // namespace cryomux::tdma
