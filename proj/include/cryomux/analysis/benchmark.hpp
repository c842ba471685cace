// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "cryomux/analysis/fidelity.hpp"
#include "cryomux/analysis/snr.hpp"
#include "cryomux/tdma/assembly.hpp"

namespace cryomux::analysis {

/// Two-level readout run: SEB `seb` is selected and held at its charge
/// degeneracy for one window, then parked at its idle gate for the next.
struct TwoLevelSetup {
    std::size_t seb = 0;
    double window_s = 50e-3;
};

tdma::TdmaSchedule two_level_schedule(const tdma::Assembly& assembly, const TwoLevelSetup& setup);

struct SnrBenchmark {
    SnrReport report;
    FidelityReport fidelity;
    double tone_hz = 0.0;
};

/// Simulates the two-level schedule with noise and estimates the SNR at tau.
SnrBenchmark run_snr_benchmark(const tdma::Assembly& assembly, double tau_s, std::uint64_t seed,
                               const TwoLevelSetup& setup = {});

}  // namespace cryomux::analysis
