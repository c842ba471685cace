// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string>

#include "cryomux/tdma/simulator.hpp"

namespace cryomux::analysis {

struct TimeWindow {
    double t_start = 0.0;
    double t_end = 0.0;
};

struct SnrReport {
    double snr_power = 0.0;
    double tau_s = 0.0;
    double signal_sq = 0.0;   // V^2
    double noise_sq = 0.0;    // V^2
    double t_min_s = 0.0;     // tau / snr
    bool noiseless = false;   // noise_sq == 0, snr reported as +inf
    std::size_t blocks_top = 0;
    std::size_t blocks_bottom = 0;
    std::complex<double> mean_top;
    std::complex<double> mean_bottom;
};

inline constexpr std::size_t kMinBlocksPerWindow = 10;

/// Boxcar-averages the trace in blocks of tau within each window. Signal is
/// the squared distance between the two level means; noise is the square of
/// the average standard deviation of the block means, measured along the
/// line joining the levels.
/// Throws WindowOverlap, WindowTooShort (fewer than 10 blocks, or a window
/// not covered by the trace) and InvalidArgument (tau below one sample).
SnrReport estimate_snr(const tdma::IqTrace& trace, TimeWindow top, TimeWindow bottom, double tau_s);

/// White-noise scaling: power SNR grows linearly with integration time.
double snr_scaling(double snr_at_tau, double tau_s, double tau_new_s);

std::string format_snr_report(const SnrReport& report);

}  // namespace cryomux::analysis
